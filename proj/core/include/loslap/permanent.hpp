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

#include "loslap/fock.hpp"
#include "loslap/matrix.hpp"

namespace loslap {

/**
 * @brief Permanent of a square complex matrix.
 *
 * Inclusion-exclusion over column subsets walked in Gray-code order, so each
 * of the 2^k subsets costs O(k) updates.  The permanent of the empty (0x0)
 * matrix is 1.  Throws std::invalid_argument for non-square input.
 *
 * If ops is non-null it is incremented by the number of complex
 * multiply-and-add operations performed.
 */
cplx permanent(const ComplexMatrix& a, std::uint64_t* ops = nullptr);

/**
 * @brief Permanent of the row-repeated matrix U_{r_s} without materializing
 *        the repetitions.
 *
 * u has one row per mode and one column per photon; row i is understood to
 * be repeated s[i] times (sum of repetitions = number of columns).  Evaluates
 * the product polynomial on roots-of-unity grids, one grid of order s[i]+1
 * per mode, which is cheaper than the Gray-code method when rows repeat.
 */
cplx permanent_repeated_rows(const ComplexMatrix& u, const FockState& s);

/**
 * @brief Submatrix with repeated rows/columns: entry (i, j) is
 *        u(rows[i]-1, cols[j]-1).  rows and cols are one-based mode lists.
 */
ComplexMatrix repeated_submatrix(const ComplexMatrix& u, const ModeAssignment& rows,
                                 const ModeAssignment& cols);

/**
 * @brief Transition amplitude <s|u|t> = Per(U^{r_t}_{r_s}) / sqrt(s! t!).
 *
 * s and t must carry the same photon count; u must have at least as many
 * rows as modes and columns as max mode referenced.
 */
cplx amplitude(const ComplexMatrix& u, const FockState& s, const FockState& t);

/**
 * @brief Full output distribution by evaluating one permanent per output
 *        state.  The input is one photon in each of the first n modes.
 *
 * u is m-by-n (or wider; only the first n columns are read).  This is the
 * reference oracle the faster engines are validated against.
 */
std::map<FockState, cplx> full_distribution_naive(const ComplexMatrix& u, int n,
                                                  std::uint64_t* ops = nullptr);

}  // namespace loslap
