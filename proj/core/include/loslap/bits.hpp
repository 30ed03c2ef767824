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

#include <bit>
#include <cstdint>

namespace loslap {

/// A subset of matrix columns encoded one column per bit (bit c <=> column c,
/// counting columns from zero).  Doubles as an index into the coefficient
/// vector of the lattice engine.
using SubsetMask = std::uint64_t;

/// Photon counts are capped one below the mask word width so that 2^n masks
/// (plus the full mask) always fit in a SubsetMask.
inline constexpr int kMaxPhotons = 63;

/// Smallest mask with the given popcount: the w lowest bits set.
constexpr SubsetMask first_combination(int w) {
  return w == 0 ? 0 : (~SubsetMask{0} >> (64 - w));
}

/**
 * @brief Next mask with the same popcount in increasing numeric order
 *        (Gosper's hack).
 *
 * Precondition: j != 0.  The caller detects exhaustion by checking that the
 * result still fits below 2^n.
 */
constexpr SubsetMask next_combination(SubsetMask j) {
  const SubsetMask t = j | (j - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(j) + 1));
}

/// True once a fixed-popcount enumeration over n-bit masks has run past the
/// last valid mask.
constexpr bool combination_exhausted(SubsetMask j, int n) {
  return j >= (SubsetMask{1} << n);
}

}  // namespace loslap
