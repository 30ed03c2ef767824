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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace loslap {

/**
 * @brief Photon occupation numbers over a fixed set of modes.
 *
 * occupations[i] is the number of photons in mode i (modes counted from
 * zero internally; serialized forms and mode lists are one-based).
 */
struct FockState {
  std::vector<int> occupations;

  FockState() = default;
  explicit FockState(std::vector<int> occ) : occupations(std::move(occ)) {}
  static FockState vacuum(int modes) { return FockState(std::vector<int>(modes, 0)); }

  int modes() const { return static_cast<int>(occupations.size()); }
  int photons() const;
  int operator[](int mode) const { return occupations[mode]; }

  bool operator==(const FockState&) const = default;
  auto operator<=>(const FockState&) const = default;  // lexicographic
};

/**
 * @brief The same state as a non-decreasing list of one-based mode labels,
 *        one entry per photon.  |0,2,1,0,1> becomes [2,2,3,5].
 */
using ModeAssignment = std::vector<int>;

ModeAssignment to_assignment(const FockState& s);
FockState from_assignment(const ModeAssignment& a, int modes);

/// Number of n-photon states over m modes, i.e. binomial(n+m-1, n).
/// Throws std::overflow_error when the count does not fit in 64 bits.
std::uint64_t fock_state_count(int m, int n);

/// Exact binomial coefficient in 64 bits; throws std::overflow_error instead
/// of wrapping.
std::uint64_t binomial_u64(int a, int b);

/**
 * @brief All n-photon states over m modes in ascending lexicographic order
 *        of their occupation vectors.
 *
 * The order is the canonical indexing used by the dense polynomial engine;
 * fock_rank() inverts it.
 */
std::vector<FockState> enumerate_fock_states(int m, int n);

/// Streaming form of enumerate_fock_states; stops early when fn returns false.
void for_each_fock_state(int m, int n, const std::function<bool(const FockState&)>& fn);

/// Position of s within enumerate_fock_states(s.modes(), s.photons()).
std::uint64_t fock_rank(const FockState& s);

/**
 * @brief sqrt(prod_i s_i!), the conversion factor between column-permanents
 *        and amplitudes.
 *
 * Uses exact 64-bit factorial products while they fit (occupations up to 20)
 * and switches to log-space accumulation beyond that to avoid overflow.
 */
double normalization_factor(const FockState& s);

/// prod_i s_i! as a double, same accumulation policy as normalization_factor.
double factorial_product(const FockState& s);

/// "0,2,1,0,1" (one-based mode order left to right, zero occupations kept).
std::string format_state(const FockState& s);

/// Inverse of format_state; throws std::invalid_argument on malformed input.
FockState parse_state(const std::string& text);

}  // namespace loslap
