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

#include "loslap/adaptive.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "loslap/slos.hpp"

namespace loslap {

namespace {

/// V must act as the identity on every row and column of a measured mode.
void check_identity_embedded(const ComplexMatrix& v, int measured, std::size_t m,
                             const FockState& outcome) {
  if (v.rows() != m || v.cols() != m) {
    throw std::invalid_argument("policy entry for outcome '" + format_state(outcome) +
                                "' is not " + std::to_string(m) + "x" + std::to_string(m));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i >= static_cast<std::size_t>(measured) && j >= static_cast<std::size_t>(measured)) {
        continue;
      }
      const cplx expected = i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      if (v(i, j) != expected) {
        throw std::invalid_argument("policy entry for outcome '" + format_state(outcome) +
                                    "' touches measured mode " + std::to_string(std::min(i, j) + 1));
      }
    }
  }
}

}  // namespace

ComplexMatrix update_U(const FockState& outcome, const ComplexMatrix& base,
                       const AdaptivePolicy& policy) {
  const std::size_t m = base.rows();
  const int k = policy.measured_modes;
  if (k < 0 || static_cast<std::size_t>(k) > m) {
    throw std::invalid_argument("measured mode count outside 0..m");
  }
  if (outcome.modes() != k) {
    throw std::invalid_argument("outcome '" + format_state(outcome) + "' does not cover " +
                                std::to_string(k) + " measured modes");
  }
  const auto it = policy.table.find(outcome);
  if (it == policy.table.end()) {
    throw std::out_of_range("no policy entry for outcome '" + format_state(outcome) + "'");
  }
  const ComplexMatrix& v = it->second;
  check_identity_embedded(v, k, m, outcome);
  if (is_exact_identity(v)) return base;  // keeps no-op corrections bit-for-bit

  ComplexMatrix out = base;
  for (std::size_t i = static_cast<std::size_t>(k); i < m; ++i) {
    for (std::size_t j = 0; j < base.cols(); ++j) {
      cplx acc{};
      for (std::size_t a = static_cast<std::size_t>(k); a < m; ++a) {
        acc += v(i, a) * base(a, j);  // v(i, a) = 0 for measured a
      }
      out(i, j) = acc;
    }
  }
  return out;
}

void validate_policy(const AdaptivePolicy& policy, int n, int m) {
  if (m < 1) throw std::invalid_argument("mode count must be positive");
  if (n < 0) throw std::invalid_argument("negative photon count");
  const int k = policy.measured_modes;
  if (k < 0 || k > m) throw std::invalid_argument("measured mode count outside 0..m");
  const auto check_entry = [&](const FockState& outcome) {
    const auto it = policy.table.find(outcome);
    if (it == policy.table.end()) {
      throw std::out_of_range("no policy entry for outcome '" + format_state(outcome) + "'");
    }
    check_identity_embedded(it->second, k, static_cast<std::size_t>(m), outcome);
    return true;
  };
  if (k == 0) {
    check_entry(FockState::vacuum(0));  // nothing measured: one empty reading
    return;
  }
  for (int total = 0; total <= n; ++total) {
    for_each_fock_state(k, total, check_entry);
  }
}

bool traverse_adaptive(const ComplexMatrix& base, int n, const AdaptivePolicy& policy,
                       const NodeVisitor& visitor, std::uint64_t memory_cap_bytes,
                       TraversalStats* stats_out) {
  const int m = static_cast<int>(base.rows());
  const int k = policy.measured_modes;
  if (k < 0 || k > m) throw std::invalid_argument("measured mode count outside 0..m");
  LatticeTraversal traversal(base, n, memory_cap_bytes);
  // Modes are pushed in non-decreasing order, so the measured outcome is
  // final exactly when the first photon lands past the measured block.
  const MatrixUpdateHook hook = [&](const FockState& state, int mode,
                                    int /*level*/) -> std::optional<ComplexMatrix> {
    if (mode < k) return std::nullopt;
    int unmeasured = 0;
    for (int i = k; i < m; ++i) unmeasured += state.occupations[i];
    if (unmeasured != 1) return std::nullopt;
    const FockState outcome{
        std::vector<int>(state.occupations.begin(), state.occupations.begin() + k)};
    return update_U(outcome, base, policy);
  };
  const bool completed = traversal.run(visitor, hook);
  if (stats_out != nullptr) *stats_out = traversal.stats();
  return completed;
}

bool iterate_amplitudes_adaptive(const ComplexMatrix& base, int n, const AdaptivePolicy& policy,
                                 const std::function<bool(const FockState&, cplx)>& sink,
                                 std::uint64_t memory_cap_bytes, TraversalStats* stats_out) {
  if (!sink) throw std::invalid_argument("null sink");
  if (n == 0) {
    LatticeTraversal traversal(base, 0, memory_cap_bytes);
    const bool completed = sink(FockState::vacuum(traversal.modes()), cplx{1.0, 0.0});
    if (stats_out != nullptr) *stats_out = traversal.stats();
    return completed;
  }
  return traverse_adaptive(
      base, n, policy,
      [&](const NodeEvent& ev) {
        if (!ev.is_leaf) return true;
        return sink(ev.state, ev.leaf_coefficient() / normalization_factor(ev.state));
      },
      memory_cap_bytes, stats_out);
}

std::map<FockState, std::map<FockState, cplx>> brute_force_adaptive(
    const ComplexMatrix& base, int n, const AdaptivePolicy& policy,
    std::uint64_t memory_cap_bytes) {
  const int m = static_cast<int>(base.rows());
  const int k = policy.measured_modes;
  if (k < 0 || k > m) throw std::invalid_argument("measured mode count outside 0..m");
  std::vector<int> measured(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) measured[i] = i + 1;

  std::map<FockState, std::map<FockState, cplx>> out;
  const auto expand_outcome = [&](const FockState& outcome) {
    const ComplexMatrix u = update_U(outcome, base, policy);
    const MaskedSlosResult masked =
        slos_masked(u, n, Mask{measured, outcome.occupations}, memory_cap_bytes);
    out.emplace(outcome, masked.amplitudes);
    return true;
  };
  if (k == 0) {
    expand_outcome(FockState::vacuum(0));  // empty mask: a full expansion
    return out;
  }
  for (int total = 0; total <= n; ++total) {
    for_each_fock_state(k, total, expand_outcome);
  }
  return out;
}

}  // namespace loslap
