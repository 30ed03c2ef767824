/**
 * Copyright 2026 the loslap authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "loslap/fock.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace loslap {

int FockState::photons() const {
  return std::accumulate(occupations.begin(), occupations.end(), 0);
}

ModeAssignment to_assignment(const FockState& s) {
  ModeAssignment a;
  a.reserve(s.photons());
  for (int i = 0; i < s.modes(); ++i) {
    for (int c = 0; c < s.occupations[i]; ++c) a.push_back(i + 1);
  }
  return a;
}

FockState from_assignment(const ModeAssignment& a, int modes) {
  FockState s = FockState::vacuum(modes);
  for (int mode : a) {
    if (mode < 1 || mode > modes) {
      throw std::invalid_argument("mode label " + std::to_string(mode) + " outside 1.." +
                                  std::to_string(modes));
    }
    ++s.occupations[mode - 1];
  }
  return s;
}

std::uint64_t binomial_u64(int a, int b) {
  if (b < 0 || b > a) return 0;
  if (b > a - b) b = a - b;
  unsigned __int128 r = 1;
  for (int i = 1; i <= b; ++i) {
    r = r * static_cast<unsigned>(a - b + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial(" + std::to_string(a) + "," + std::to_string(b) +
                                ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t fock_state_count(int m, int n) {
  if (m < 1 || n < 0) throw std::invalid_argument("need m >= 1 and n >= 0");
  return binomial_u64(n + m - 1, n);
}

void for_each_fock_state(int m, int n, const std::function<bool(const FockState&)>& fn) {
  fock_state_count(m, n);  // validates (m, n) and rejects overflowing counts
  FockState s = FockState::vacuum(m);
  s.occupations[m - 1] = n;  // lexicographically smallest state
  for (;;) {
    if (!fn(s)) return;
    // Successor: bump the deepest position that still has photons to its
    // right, then park the remaining right-side photons in the last mode
    // (the lexicographically smallest completion).
    int last = m - 1;
    while (last >= 0 && s.occupations[last] == 0) --last;
    if (last <= 0) return;  // everything sits in mode 0: lexicographic maximum
    const int i = (s.occupations[m - 1] > 0) ? m - 2 : last - 1;
    int moved = 0;
    for (int j = i + 1; j < m; ++j) {
      moved += s.occupations[j];
      s.occupations[j] = 0;
    }
    ++s.occupations[i];
    s.occupations[m - 1] = moved - 1;
  }
}

std::vector<FockState> enumerate_fock_states(int m, int n) {
  std::vector<FockState> out;
  out.reserve(fock_state_count(m, n));
  for_each_fock_state(m, n, [&](const FockState& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::uint64_t fock_rank(const FockState& s) {
  const int m = s.modes();
  const int n = s.photons();
  std::uint64_t rank = 0;
  int placed = 0;
  for (int i = 0; i < m; ++i) {
    const int rest_modes = m - i - 1;
    for (int v = 0; v < s.occupations[i]; ++v) {
      // count of states sharing the prefix but holding only v photons here
      rank += binomial_u64(n - placed - v + rest_modes - 1, rest_modes - 1);
    }
    placed += s.occupations[i];
  }
  return rank;
}

namespace {

constexpr int kExactFactorials = 21;  // 0! .. 20! fit in 64 bits

constexpr std::uint64_t kFactorial[kExactFactorials] = {
    1ull,
    1ull,
    2ull,
    6ull,
    24ull,
    120ull,
    720ull,
    5040ull,
    40320ull,
    362880ull,
    3628800ull,
    39916800ull,
    479001600ull,
    6227020800ull,
    87178291200ull,
    1307674368000ull,
    20922789888000ull,
    355687428096000ull,
    6402373705728000ull,
    121645100408832000ull,
    2432902008176640000ull,
};

// prod s_i! while it stays exact in integers; -1 signals "use log space".
double factorial_product_exact(const FockState& s) {
  unsigned __int128 prod = 1;
  for (int occ : s.occupations) {
    if (occ >= kExactFactorials) return -1.0;
    if (prod >= (static_cast<unsigned __int128>(1) << 64)) return -1.0;
    prod *= kFactorial[occ];
  }
  return static_cast<double>(prod);
}

double log_factorial_sum(const FockState& s) {
  double acc = 0.0;
  for (int occ : s.occupations) acc += std::lgamma(static_cast<double>(occ) + 1.0);
  return acc;
}

}  // namespace

double factorial_product(const FockState& s) {
  const double exact = factorial_product_exact(s);
  if (exact >= 0.0) return exact;
  return std::exp(log_factorial_sum(s));
}

double normalization_factor(const FockState& s) {
  const double exact = factorial_product_exact(s);
  if (exact >= 0.0) return std::sqrt(exact);
  return std::exp(0.5 * log_factorial_sum(s));
}

std::string format_state(const FockState& s) {
  std::string out;
  for (int i = 0; i < s.modes(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(s.occupations[i]);
  }
  return out;
}

FockState parse_state(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty occupation list");
  std::vector<int> occ;
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = text.find(',', pos);
    const bool done = comma == std::string::npos;
    if (done) comma = text.size();
    const std::string field = text.substr(pos, comma - pos);
    if (field.empty()) {
      throw std::invalid_argument("empty field in occupation list '" + text + "'");
    }
    char* end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || v < 0) {
      throw std::invalid_argument("bad occupation '" + field + "'");
    }
    occ.push_back(static_cast<int>(v));
    if (done) break;
    pos = comma + 1;
  }
  return FockState(std::move(occ));
}

}  // namespace loslap
