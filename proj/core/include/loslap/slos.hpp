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

#include <cstdint>
#include <map>
#include <vector>

#include "loslap/budget.hpp"
#include "loslap/fock.hpp"
#include "loslap/matrix.hpp"

namespace loslap {

/**
 * @brief Result of a full term-by-term expansion of the output state.
 *
 * amplitudes is indexed by fock_rank over (m, n).  complex_ops counts one
 * multiplication plus one addition for every (monomial, contributing mode)
 * pair, the native cost unit of this engine.  peak_coefficient_slots is the
 * largest number of simultaneously live polynomial coefficients (the last
 * two photon generations).
 */
struct SlosResult {
  int m = 0;
  int n = 0;
  std::vector<cplx> amplitudes;
  std::uint64_t complex_ops = 0;
  std::uint64_t peak_coefficient_slots = 0;
};

/**
 * @brief Expand prod_j (sum_i u(i,j) x_i) one column at a time and read all
 *        amplitudes off the final polynomial.
 *
 * u is m-by-n (or wider; only the first n columns are read).  The dense
 * coefficient array of generation k is indexed by the lexicographic state
 * order of enumerate_fock_states(m, k); only the current and next
 * generations are alive at any time.  Refuses with budget_error before
 * allocating if the two largest generations would exceed memory_cap_bytes.
 */
SlosResult slos_full(const ComplexMatrix& u, int n,
                     std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes);

/**
 * @brief A measurement pattern on a subset of modes: occupations[i] photons
 *        required in mode modes[i] (one-based, strictly increasing).
 */
struct Mask {
  std::vector<int> modes;
  std::vector<int> occupations;

  int photons() const;
  bool operator==(const Mask&) const = default;
};

/**
 * @brief All masks over the given mode set for an n-photon experiment.
 *
 * With exhaustive == false the mask totals range over 0..n (some photons may
 * land outside the masked modes).  With exhaustive == true the mode set is
 * understood to cover every mode, so totals are exactly n.
 */
std::vector<Mask> enumerate_masks(const std::vector<int>& mode_set, int n, bool exhaustive);

struct MaskedSlosResult {
  std::map<FockState, cplx> amplitudes;  // states matching the mask exactly
  std::uint64_t complex_ops = 0;
};

/**
 * @brief Expansion restricted to monomials that can still reach an output
 *        matching the mask.
 *
 * A degree-d monomial survives iff its occupation on every masked mode is at
 * most the mask target and the remaining n-d photons cover the total masked
 * deficit.  Survivors of degree n match the mask exactly.  All parents of a
 * survivor are survivors, so pruned coefficients are never needed and the
 * surviving amplitudes equal the corresponding slos_full amplitudes
 * bit-for-bit.
 */
MaskedSlosResult slos_masked(const ComplexMatrix& u, int n, const Mask& mask,
                             std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes);

}  // namespace loslap
