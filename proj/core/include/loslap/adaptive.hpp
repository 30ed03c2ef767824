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

#include "loslap/budget.hpp"
#include "loslap/fock.hpp"
#include "loslap/lattice.hpp"
#include "loslap/matrix.hpp"

namespace loslap {

/**
 * @brief Single measure-and-feed-forward layer.
 *
 * The first measured_modes modes are detected; the remaining modes then pass
 * through a correction unitary chosen by the observed outcome.  Each table
 * entry maps an outcome (occupations of the measured modes, any photon total
 * from 0 to n) to an m-by-m unitary that differs from the identity only on
 * the unmeasured block.
 */
struct AdaptivePolicy {
  int measured_modes = 0;
  std::map<FockState, ComplexMatrix> table;
};

/**
 * @brief Effective interferometer for one outcome: unmeasured-mode rows of
 *        V * base, measured-mode rows of base verbatim.
 *
 * base is m-by-n.  Throws std::out_of_range naming the outcome when the
 * policy has no entry for it, std::invalid_argument when the entry is not
 * identity-embedded on the measured block.  An entry that is exactly the
 * identity returns base unchanged.
 */
ComplexMatrix update_U(const FockState& outcome, const ComplexMatrix& base,
                       const AdaptivePolicy& policy);

/// Checks that the policy has a well-formed entry for every outcome with
/// 0..n photons over the measured modes; throws on the first defect.
void validate_policy(const AdaptivePolicy& policy, int n, int m);

/**
 * @brief Lattice traversal with the feed-forward layer applied.
 *
 * Because modes are pushed in non-decreasing order, all photons landing in
 * measured modes are placed before the first unmeasured push.  At that
 * boundary the engine swaps in update_U(outcome, base, policy) for the whole
 * subtree; ancestor coefficients stay valid since measured-mode rows are
 * untouched.  Leaves reached inside the measured prefix never consult the
 * policy.
 */
bool traverse_adaptive(const ComplexMatrix& base, int n, const AdaptivePolicy& policy,
                       const NodeVisitor& visitor,
                       std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
                       TraversalStats* stats_out = nullptr);

/// Leaf stream over traverse_adaptive, same conventions as iterate_amplitudes.
bool iterate_amplitudes_adaptive(const ComplexMatrix& base, int n, const AdaptivePolicy& policy,
                                 const std::function<bool(const FockState&, cplx)>& sink,
                                 std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
                                 TraversalStats* stats_out = nullptr);

/**
 * @brief Oracle: one masked expansion per outcome.
 *
 * For every outcome p over the measured modes (0..n photons), runs the
 * term-by-term engine on update_U(p, base, policy) masked to outputs whose
 * measured prefix equals p.  The union over outcomes covers each output
 * state exactly once.
 */
std::map<FockState, std::map<FockState, cplx>> brute_force_adaptive(
    const ComplexMatrix& base, int n, const AdaptivePolicy& policy,
    std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes);

}  // namespace loslap
