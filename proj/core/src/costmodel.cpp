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

#include "loslap/costmodel.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "loslap/bits.hpp"
#include "loslap/fock.hpp"

namespace loslap {

namespace {

void check_photons_modes(int n, int m) {
  if (n < 0) throw std::invalid_argument("negative photon count");
  if (m < 1) throw std::invalid_argument("mode count must be positive");
}

void check_mask_size(int k, int m) {
  if (k < 1 || k > m) throw std::invalid_argument("mask size outside 1..m");
}

unsigned long to_ul(int v) { return static_cast<unsigned long>(v); }

}  // namespace

Count binomial(unsigned long a, unsigned long b) {
  Count c;
  mpz_bin_uiui(c.get_mpz_t(), a, b);
  return c;
}

Count flops_loslap(int n, int m) {
  check_photons_modes(n, m);
  Count total = 0;
  for (int k = 1; k <= n; ++k) {
    total += binomial(to_ul(n - 1), to_ul(k - 1)) * binomial(to_ul(m + k - 1), to_ul(m - 1));
  }
  return 2 * n * total;
}

Count flops_slos(int n, int m) {
  check_photons_modes(n, m);
  return 2 * n * binomial(to_ul(n + m - 1), to_ul(n));
}

Count flops_slos_mask(int n, int m, int k) {
  check_photons_modes(n, m);
  check_mask_size(k, m);
  const int alpha = k == m ? 1 : 0;
  Count total = 0;
  for (int s = 1; s <= n; ++s) {
    for (int d = s; d <= n; ++d) {
      total += 2 * s * binomial(to_ul(n - d + k - alpha), to_ul(n - d)) *
               binomial(to_ul(m), to_ul(s)) * binomial(to_ul(d - 1), to_ul(d - s));
    }
  }
  return total;
}

Count flops_permanent_all(int n, int m) {
  check_photons_modes(n, m);
  return n * binomial(to_ul(2 * m + n - 1), to_ul(n));
}

Count flops_permanent_all_enumerated(int n, int m) {
  check_photons_modes(n, m);
  if (n == 0) return 0;
  Count total = 0;
  for_each_fock_state(m, n, [&](const FockState& s) {
    Count grid = 1;
    int cheapest = n + 1;
    for (const int occ : s.occupations) {
      grid *= occ + 1;
      if (occ > 0 && occ + 1 < cheapest) cheapest = occ + 1;
    }
    mpz_divexact_ui(grid.get_mpz_t(), grid.get_mpz_t(), to_ul(cheapest));
    total += n * grid;
    return true;
  });
  return total;
}

Count mem_loslap_slots(int n) {
  if (n < 0) throw std::invalid_argument("negative photon count");
  return Count(1) << n;
}

Count mem_slos_slots(int n, int m) {
  check_photons_modes(n, m);
  if (n == 0) return 1;
  return binomial(to_ul(m + n - 1), to_ul(n)) + binomial(to_ul(m + n - 2), to_ul(n - 1));
}

Count mem_permanent_slots(int n, int m) {
  check_photons_modes(n, m);
  return Count(m) * m;
}

namespace {

/// ceil((1 + p/k)^k) by exact big-integer division of (k+p)^k by k^k.
Count ceil_growth_factor_exact(int k, int p) {
  Count denom, numer;
  mpz_ui_pow_ui(denom.get_mpz_t(), to_ul(k), to_ul(k));
  mpz_ui_pow_ui(numer.get_mpz_t(), to_ul(k + p), to_ul(k));
  mpz_cdiv_q(numer.get_mpz_t(), numer.get_mpz_t(), denom.get_mpz_t());
  return numer;
}

/**
 * ceil((1 + p/k)^k) without touching k-digit integers when possible.
 *
 * The value lies strictly inside (e^p * (1 - p^2/(2k)), e^p), so once k is
 * large the interval pins the ceiling down; only when an integer falls inside
 * do we pay for the exact big-integer power.  That keeps the mask-size scans
 * polynomial even for mode counts in the millions.
 */
Count ceil_growth_factor(int k, int p) {
  const double spread = static_cast<double>(p) * p / (2.0 * k);
  if (spread < 1.0) {
    const double hi = std::exp(p) * (1.0 + 1e-9) + 1e-9;
    const double lo = std::exp(p) * (1.0 - spread) * (1.0 - 1e-9) - 1e-9;
    const double first = std::floor(lo) + 1.0;  // smallest ceiling the bounds allow
    const double last = std::ceil(hi);          // largest ceiling the bounds allow
    if (first == last && lo > 0.0) return Count(first);
  }
  return ceil_growth_factor_exact(k, p);
}

}  // namespace

Count mem_slos_mask_slots(int n, int m, int k) {
  check_photons_modes(n, m);
  check_mask_size(k, m);
  if (n == 0) return 1;
  Count best = 0;
  for (int p = 1; p <= n; ++p) {
    const Count states = binomial(to_ul(m - k + n - p), to_ul(n - p));
    // (1 + p/k)^k < e^p, so this skip can never hide the true maximum.
    if (Count(std::ceil(std::exp(p)) + 1.0) * states <= best) continue;
    const Count slots = ceil_growth_factor(k, p) * states;
    if (slots > best) best = slots;
  }
  return best;
}

std::string method_name(Method method) {
  switch (method) {
    case Method::permanent_all:
      return "permanent";
    case Method::slos:
      return "slos";
    case Method::slos_mask:
      return "slos-mask";
    case Method::loslap:
      return "loslap";
  }
  throw std::invalid_argument("unknown method");
}

Method parse_method(const std::string& name) {
  if (name == "permanent") return Method::permanent_all;
  if (name == "slos") return Method::slos;
  if (name == "slos-mask") return Method::slos_mask;
  if (name == "loslap") return Method::loslap;
  throw std::invalid_argument("unknown method '" + name + "'");
}

CostReport cost_report(Method method, int n, int m, int k) {
  CostReport report;
  report.method = method;
  switch (method) {
    case Method::permanent_all:
      report.flops = flops_permanent_all(n, m);
      report.memory_slots = mem_permanent_slots(n, m);
      break;
    case Method::slos:
      report.flops = flops_slos(n, m);
      report.memory_slots = mem_slos_slots(n, m);
      break;
    case Method::slos_mask:
      report.flops = flops_slos_mask(n, m, k);
      report.memory_slots = mem_slos_mask_slots(n, m, k);
      break;
    case Method::loslap:
      report.flops = flops_loslap(n, m);
      report.memory_slots = mem_loslap_slots(n);
      break;
  }
  return report;
}

namespace {

struct BudgetLimits {
  Count flop_limit;
  Count slot_limit;
};

BudgetLimits budget_limits(const Budget& budget) {
  if (budget.bytes_per_slot < 1) throw std::invalid_argument("bytes per slot must be positive");
  const double flops = budget.flops_per_second * budget.wall_seconds;
  if (!(flops > 0.0) || !std::isfinite(flops)) {
    throw std::invalid_argument("flop budget must be positive and finite");
  }
  BudgetLimits limits;
  limits.flop_limit = Count(flops);
  limits.slot_limit = Count(budget.memory_bytes / static_cast<std::uint64_t>(budget.bytes_per_slot));
  return limits;
}

bool fits_budget(Method method, int n, int m, const Budget& budget, const BudgetLimits& limits) {
  if (method == Method::slos_mask) {
    const int k = min_mask_for_memory(n, m, budget.memory_bytes, budget.bytes_per_slot);
    if (k == 0) return false;
    return flops_slos_mask(n, m, k) <= limits.flop_limit;
  }
  const CostReport report = cost_report(method, n, m);
  return report.memory_slots <= limits.slot_limit && report.flops <= limits.flop_limit;
}

}  // namespace

int max_modes_within_budget(Method method, int n, const Budget& budget) {
  if (n < 0) throw std::invalid_argument("negative photon count");
  const BudgetLimits limits = budget_limits(budget);
  const auto feasible = [&](int m) { return fits_budget(method, n, m, budget, limits); };
  if (!feasible(1)) return 0;
  constexpr int kCeiling = std::numeric_limits<int>::max();
  int lo = 1;  // largest known-feasible m
  int hi = 0;  // smallest known-infeasible m, 0 while unknown
  for (int probe = 2; hi == 0; probe = probe > kCeiling / 2 ? kCeiling : 2 * probe) {
    if (feasible(probe)) {
      lo = probe;
      if (probe == kCeiling) return kCeiling;  // saturated
    } else {
      hi = probe;
    }
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

int loslap_max_photons(std::uint64_t memory_bytes, int bytes_per_slot) {
  if (bytes_per_slot < 1) throw std::invalid_argument("bytes per slot must be positive");
  const std::uint64_t slots = memory_bytes / static_cast<std::uint64_t>(bytes_per_slot);
  if (slots == 0) return -1;
  const int n = 63 - std::countl_zero(slots);
  return n > kMaxPhotons ? kMaxPhotons : n;
}

int crossover_mask_size(int n, int m) {
  check_photons_modes(n, m);
  const Count lattice = flops_loslap(n, m);
  for (int k = 1; k <= m; ++k) {
    if (flops_slos_mask(n, m, k) >= lattice) return k;
  }
  return 0;
}

int min_mask_for_memory(int n, int m, std::uint64_t memory_bytes, int bytes_per_slot) {
  check_photons_modes(n, m);
  if (bytes_per_slot < 1) throw std::invalid_argument("bytes per slot must be positive");
  const Count slot_limit(memory_bytes / static_cast<std::uint64_t>(bytes_per_slot));
  int first = 1;
  if (n > 0) {
    // The p = 1 summand alone needs 2C(m-k+n-1, n-1) slots, which only shrinks
    // as k grows, so a binary search skips the provably infeasible prefix.
    const auto lower_bound_fits = [&](int k) {
      return 2 * binomial(to_ul(m - k + n - 1), to_ul(n - 1)) <= slot_limit;
    };
    if (!lower_bound_fits(m)) return 0;
    int lo = 0, hi = m;  // lower_bound_fits is false at lo, true at hi
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (lower_bound_fits(mid) ? hi : lo) = mid;
    }
    first = hi;
  }
  for (int k = first; k <= m; ++k) {
    if (mem_slos_mask_slots(n, m, k) <= slot_limit) return k;
  }
  return 0;
}

bool loslap_dominates(int n, int m, std::uint64_t memory_bytes, int bytes_per_slot) {
  const int crossover = crossover_mask_size(n, m);
  if (crossover == 0) return false;  // the masked expansion is never slower
  const int smallest = min_mask_for_memory(n, m, memory_bytes, bytes_per_slot);
  return smallest == 0 || smallest > crossover;
}

}  // namespace loslap
