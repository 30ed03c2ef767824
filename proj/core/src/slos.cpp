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

#include "loslap/slos.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace loslap {

namespace {

void check_photon_args(const ComplexMatrix& u, int n) {
  if (u.rows() == 0) throw std::invalid_argument("empty matrix");
  if (n < 0) throw std::invalid_argument("negative photon count");
  if (static_cast<std::size_t>(n) > u.cols()) {
    throw std::invalid_argument("photon count exceeds column count");
  }
}

// Ranks of all states one photon below a given state, for the gather step.
// Uses the prefix-sum form of the lexicographic rank; costs O(m) amortized
// per support mode.
class GatherIndexer {
 public:
  GatherIndexer(int m, int n) : m_(m) {
    // binomial table up to (n + m) on both axes; fits easily at dense scale
    binom_.assign(n + m + 1, std::vector<std::uint64_t>(m + 1, 0));
    for (int a = 0; a <= n + m; ++a) {
      binom_[a][0] = 1;
      for (int b = 1; b <= std::min(a, m); ++b) {
        binom_[a][b] = binom_[a - 1][b - 1] + (a - 1 >= b ? binom_[a - 1][b] : 0);
      }
    }
  }

  std::uint64_t rank(const std::vector<int>& occ, int total) const {
    std::uint64_t rank = 0;
    int placed = 0;
    for (int i = 0; i < m_; ++i) {
      const int rest = m_ - i - 1;
      if (rest == 0) break;
      for (int v = 0; v < occ[i]; ++v) {
        rank += choose(total - placed - v + rest - 1, rest - 1);
      }
      placed += occ[i];
    }
    return rank;
  }

 private:
  std::uint64_t choose(int a, int b) const {
    if (b < 0 || b > a || a < 0) return 0;
    return binom_[a][b];
  }

  int m_;
  std::vector<std::vector<std::uint64_t>> binom_;
};

struct ExpansionBudget {
  std::uint64_t peak_slots = 0;
};

// The two largest generations live simultaneously; refuse before touching
// memory if they cannot fit.
ExpansionBudget check_expansion_budget(int m, int n, std::uint64_t cap_bytes) {
  std::uint64_t last = fock_state_count(m, n);
  std::uint64_t prev = n >= 1 ? fock_state_count(m, n - 1) : 0;
  if (last > (std::numeric_limits<std::uint64_t>::max)() - prev) {
    throw budget_error("coefficient count overflows");
  }
  const std::uint64_t peak = last + prev;
  if (peak > cap_bytes / kBytesPerCoefficientSlot) {
    throw budget_error("expansion needs " + std::to_string(peak) + " coefficient slots (" +
                       std::to_string(peak) + " * " + std::to_string(kBytesPerCoefficientSlot) +
                       " bytes) which exceeds the budget of " + std::to_string(cap_bytes) +
                       " bytes");
  }
  return {peak};
}

}  // namespace

SlosResult slos_full(const ComplexMatrix& u, int n, std::uint64_t memory_cap_bytes) {
  check_photon_args(u, n);
  const int m = static_cast<int>(u.rows());
  SlosResult res;
  res.m = m;
  res.n = n;
  res.peak_coefficient_slots = check_expansion_budget(m, n, memory_cap_bytes).peak_slots;

  GatherIndexer indexer(m, n);
  std::vector<cplx> cur(1, cplx{1.0, 0.0});  // generation 0: the constant 1
  std::vector<cplx> nxt;
  std::vector<int> occ;
  for (int k = 0; k < n; ++k) {
    nxt.assign(fock_state_count(m, k + 1), cplx{});
    std::size_t idx = 0;
    for_each_fock_state(m, k + 1, [&](const FockState& child) {
      occ = child.occupations;
      cplx acc{};
      for (int i = 0; i < m; ++i) {
        if (occ[i] == 0) continue;
        --occ[i];
        acc += u(i, k) * cur[indexer.rank(occ, k)];
        ++occ[i];
        res.complex_ops += 2;
      }
      nxt[idx++] = acc;
      return true;
    });
    cur.swap(nxt);
  }

  res.amplitudes.resize(cur.size());
  std::size_t idx = 0;
  for_each_fock_state(m, n, [&](const FockState& s) {
    // polynomial coefficient = permanent / s!, amplitude = permanent / sqrt(s!)
    res.amplitudes[idx] = cur[idx] * normalization_factor(s);
    ++idx;
    return true;
  });
  return res;
}

int Mask::photons() const {
  return std::accumulate(occupations.begin(), occupations.end(), 0);
}

std::vector<Mask> enumerate_masks(const std::vector<int>& mode_set, int n, bool exhaustive) {
  if (n < 0) throw std::invalid_argument("negative photon count");
  for (std::size_t i = 0; i < mode_set.size(); ++i) {
    if (mode_set[i] < 1 || (i > 0 && mode_set[i] <= mode_set[i - 1])) {
      throw std::invalid_argument("mask modes must be strictly increasing and one-based");
    }
  }
  const int k = static_cast<int>(mode_set.size());
  if (k == 0) throw std::invalid_argument("empty mask mode set");
  std::vector<Mask> out;
  const int lo = exhaustive ? n : 0;
  for (int total = lo; total <= n; ++total) {
    for_each_fock_state(k, total, [&](const FockState& occ) {
      out.push_back(Mask{mode_set, occ.occupations});
      return true;
    });
  }
  return out;
}

MaskedSlosResult slos_masked(const ComplexMatrix& u, int n, const Mask& mask,
                             std::uint64_t memory_cap_bytes) {
  check_photon_args(u, n);
  const int m = static_cast<int>(u.rows());
  if (mask.modes.size() != mask.occupations.size()) {
    throw std::invalid_argument("mask mode/occupation length mismatch");
  }
  for (std::size_t i = 0; i < mask.modes.size(); ++i) {
    if (mask.modes[i] < 1 || mask.modes[i] > m) {
      throw std::invalid_argument("mask mode " + std::to_string(mask.modes[i]) + " outside 1.." +
                                  std::to_string(m));
    }
    if (i > 0 && mask.modes[i] <= mask.modes[i - 1]) {
      throw std::invalid_argument("mask modes must be strictly increasing");
    }
    if (mask.occupations[i] < 0) throw std::invalid_argument("negative mask occupation");
  }
  check_expansion_budget(m, n, memory_cap_bytes);

  // target[i] = required occupation of mode i, or -1 when unconstrained
  std::vector<int> target(m, -1);
  for (std::size_t i = 0; i < mask.modes.size(); ++i) {
    target[mask.modes[i] - 1] = mask.occupations[i];
  }

  MaskedSlosResult res;
  if (mask.photons() > n) return res;  // unreachable mask: nothing survives

  // A monomial of degree d survives iff no masked mode is overfull and the
  // remaining n-d photons can still fill every masked deficit.  Survival of
  // a child implies survival of all its parents, so gathering only over
  // survivors reproduces the unmasked coefficients exactly.
  const auto survives = [&](const std::vector<int>& occ, int d) {
    int deficit = 0;
    for (std::size_t i = 0; i < mask.modes.size(); ++i) {
      const int have = occ[mask.modes[i] - 1];
      const int want = mask.occupations[i];
      if (have > want) return false;
      deficit += want - have;
    }
    return deficit <= n - d;
  };

  GatherIndexer indexer(m, n);
  std::vector<cplx> cur(1, cplx{1.0, 0.0});
  std::vector<cplx> nxt;
  std::vector<char> cur_alive(1, 1);
  std::vector<char> nxt_alive;
  std::vector<int> occ;
  for (int k = 0; k < n; ++k) {
    const std::uint64_t child_count = fock_state_count(m, k + 1);
    nxt.assign(child_count, cplx{});
    nxt_alive.assign(child_count, 0);
    std::size_t idx = 0;
    for_each_fock_state(m, k + 1, [&](const FockState& child) {
      if (survives(child.occupations, k + 1)) {
        occ = child.occupations;
        cplx acc{};
        for (int i = 0; i < m; ++i) {
          if (occ[i] == 0) continue;
          --occ[i];
          acc += u(i, k) * cur[indexer.rank(occ, k)];
          ++occ[i];
          res.complex_ops += 2;
        }
        nxt[idx] = acc;
        nxt_alive[idx] = 1;
      }
      ++idx;
      return true;
    });
    cur.swap(nxt);
    cur_alive.swap(nxt_alive);
  }

  std::size_t idx = 0;
  for_each_fock_state(m, n, [&](const FockState& s) {
    if (cur_alive[idx]) {
      res.amplitudes.emplace(s, cur[idx] * normalization_factor(s));
    }
    ++idx;
    return true;
  });
  return res;
}

}  // namespace loslap
