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

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace loslap {

/**
 * Closed-form resource counts for the competing engines.  All evaluations
 * are exact big-integer arithmetic — these formulas are compared against
 * instrumented runs and against each other at boundaries, where floating
 * point would blur the comparison.  Counts are complex operations (one
 * multiply and one add each count separately); memory is in coefficient
 * slots of kBytesPerCoefficientSlot bytes.
 */

using Count = mpz_class;

Count binomial(unsigned long a, unsigned long b);

/// Lattice engine: 2n * sum_{k=1..n} binomial(n-1, k-1) * binomial(m+k-1, m-1).
Count flops_loslap(int n, int m);

/// Term-by-term expansion: 2n * binomial(n+m-1, n).
Count flops_slos(int n, int m);

/// Masked expansion summed over all masks of a k-mode set:
///   sum_{s=1..n} sum_{d=s..n} 2s * binomial(n-d+k-a, n-d)
///                * binomial(m, s) * binomial(d-1, d-s)
/// with a = 1 when the masked set covers all modes (k == m), else 0.
Count flops_slos_mask(int n, int m, int k);

/// One permanent per output state at its own cost: n * binomial(2m+n-1, n),
/// via the identity  sum over states of prod_j (s_j + 1) = binomial(2m+n-1, n).
Count flops_permanent_all(int n, int m);

/// Same quantity summed state by state with each permanent at its cheapest
/// row-repetition cost n * prod_j (s_j+1) / min_{s_l != 0} (s_l + 1).
/// Exact but enumerative; desk-scale (n, m) only.
Count flops_permanent_all_enumerated(int n, int m);

Count mem_loslap_slots(int n);               // 2^n
Count mem_slos_slots(int n, int m);          // two generations: C(m+n-1,n) + C(m+n-2,n-1)
Count mem_permanent_slots(int n, int m);     // the unitary itself: m^2

/// Worst mask of p photons bounded by ceil((1+p/k)^k) live parents:
///   max_{p=1..n} ceil((1+p/k)^k) * binomial(m-k+n-p, n-p).
Count mem_slos_mask_slots(int n, int m, int k);

enum class Method { permanent_all, slos, slos_mask, loslap };

std::string method_name(Method method);
Method parse_method(const std::string& name);

struct Budget {
  std::uint64_t memory_bytes = 8ull << 30;
  double flops_per_second = 1e9;
  double wall_seconds = 86400.0;
  int bytes_per_slot = 16;
};

struct CostReport {
  Method method = Method::loslap;
  Count flops;
  Count memory_slots;
};

/// k is the mask size and only read for Method::slos_mask.
CostReport cost_report(Method method, int n, int m, int k = 0);

/**
 * @brief Largest mode count m the method can finish within the budget at
 *        photon number n; 0 when even m = 1 is infeasible.
 *
 * Feasibility is monotone in m (every count grows with m), so the boundary
 * is found by doubling and bisection.  For Method::slos_mask each m is
 * feasible iff some mask size k fits the memory budget and the cheapest
 * such k also fits the time budget.
 */
int max_modes_within_budget(Method method, int n, const Budget& budget);

/// Largest photon number whose 2^n-slot working set fits in memory_bytes
/// (the lattice engine's memory is independent of m).
int loslap_max_photons(std::uint64_t memory_bytes, int bytes_per_slot = 16);

/**
 * @brief Smallest k in 1..m whose masked-expansion operation count reaches
 *        the lattice engine's: flops_slos_mask(n, m, k) >= flops_loslap(n, m).
 *        0 when no k qualifies.
 */
int crossover_mask_size(int n, int m);

/// Smallest k in 1..m whose masked expansion fits in memory_bytes; 0 when
/// none fits.
int min_mask_for_memory(int n, int m, std::uint64_t memory_bytes, int bytes_per_slot = 16);

/**
 * @brief True when memory forces every admissible mask size past the
 *        crossover: the crossover exists and no memory-admissible mask size
 *        sits at or below it (no admissible mask at all counts).  The
 *        lattice engine is then at least as fast for every adaptive
 *        measurement count.
 */
bool loslap_dominates(int n, int m, std::uint64_t memory_bytes, int bytes_per_slot = 16);

}  // namespace loslap
