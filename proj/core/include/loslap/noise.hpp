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
#include <functional>
#include <map>
#include <vector>

#include "loslap/budget.hpp"
#include "loslap/fock.hpp"
#include "loslap/lattice.hpp"
#include "loslap/matrix.hpp"

namespace loslap {

/**
 * @brief Output distribution under uniform photon loss.
 *
 * eta is the probability that each photon is lost (0 = lossless).  Every
 * interior node of one lossless traversal already stores the permanents of
 * every subset of surviving input columns, so the mixed-state probability
 *
 *   p(s) = eta^(n-k) (1-eta)^k * sum over column subsets |Per|^2 / prod s_i!
 *
 * (k the photon count of s) is read off each node at no extra traversal
 * cost; each output state occurs at exactly one node, so results stream.
 * The vacuum outcome eta^n is emitted first.  The sink receives
 * (state, photons, probability); return false to stop.
 */
bool iterate_lossy(const ComplexMatrix& u, int n, double eta,
                   const std::function<bool(const FockState&, int, double)>& sink,
                   std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
                   TraversalStats* stats_out = nullptr);

std::map<FockState, double> lossy_distribution(
    const ComplexMatrix& u, int n, double eta,
    std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
    TraversalStats* stats_out = nullptr);

/// Groups of input photons (one-based column indices) that are mutually
/// distinguishable; photons within a group stay indistinguishable.
using PhotonGroups = std::vector<std::vector<int>>;

/**
 * @brief Output distribution for partially distinguishable input photons.
 *
 * Each group interferes only internally, exactly as if every photon outside
 * the group had been lost, so each group's output distribution is read from
 * the interior nodes of one lossless traversal (the coefficient indexed by
 * the complement of the group's column set).  The total distribution is the
 * convolution of the group distributions.  groups must partition 1..n.
 *
 * Refuses with budget_error when the product of the groups' output-set
 * sizes exceeds convolution_budget entries.
 */
std::map<FockState, double> distinguishable_distribution(
    const ComplexMatrix& u, int n, const PhotonGroups& groups,
    std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
    std::uint64_t convolution_budget = 1ull << 24);

/**
 * @brief Amplitudes for two photons per input mode.
 *
 * With doubled == true the input is two photons in each of the first n
 * modes: every column is repeated, a 2n-photon traversal runs, and each
 * amplitude picks up an extra 1/sqrt(2!^n) from the input normalization.
 * With doubled == false this is exactly the single-photon distribution.
 */
std::map<FockState, cplx> multiphoton_distribution(
    const ComplexMatrix& u, int n, bool doubled,
    std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
    TraversalStats* stats_out = nullptr);

}  // namespace loslap
