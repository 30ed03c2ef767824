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

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "loslap/bits.hpp"
#include "loslap/budget.hpp"
#include "loslap/fock.hpp"
#include "loslap/matrix.hpp"

namespace loslap {

/**
 * The depth-first lattice engine.
 *
 * The output state is the product P(x) = prod_{j=0}^{n-1} P_j(x) with
 * P_j(x) = sum_i u(i,j) x_i.  Every interior object of the search is a
 * partial derivative of P, identified by the multiset of modes already
 * differentiated by; its data is the family of permanents of every subset of
 * the remaining columns against those modes.  The whole family lives in a
 * single vector of 2^n coefficients: index j holds the permanent of the
 * columns NOT in mask j (bit c <=> column c still pending), so the root is
 * v[2^n - 1] = 1 and a leaf's value sits at v[0].
 *
 * One band of constant popcount is rewritten per step, in place; all bands
 * of higher popcount (the ancestors) stay valid, which is what makes the
 * depth-first walk work in 2^n memory total.
 */

/**
 * @brief One in-place band update after differentiating by mode `mode`.
 *
 * v.size() must be a power of two (2^n).  level is the depth of the child
 * being computed, 1 <= level <= n.  Every index j with popcount n-level is
 * recomputed as
 *
 *   v[j] = sum over bits p not in j of  u(mode, p) * v[j | 2^p]
 *
 * reading only the parent band (popcount n-level+1) and touching nothing
 * else.  Performs exactly (n-level+1) * binomial(n, n-level+1) complex
 * multiply-and-adds; if ops is non-null it is incremented by twice that
 * (one multiplication plus one addition per pair).
 */
void update_coefficients(const ComplexMatrix& u, int mode, int level, std::vector<cplx>& v,
                         std::uint64_t* ops = nullptr);

/**
 * @brief A node of the traversal as seen by a visitor.
 *
 * state/level describe the multiset of modes differentiated so far.  The
 * coefficient band of this node is the set of indices of coefficients with
 * popcount n-level; iterate it with for_each_coefficient.  References are
 * valid only during the visitor call.
 */
struct NodeEvent {
  const FockState& state;
  int level = 0;
  int photons_total = 0;  // n of the traversal
  bool is_leaf = false;
  const std::vector<cplx>& coefficients;

  /// Leaf value before normalization: the permanent of all n columns
  /// against the leaf's mode multiset.
  cplx leaf_coefficient() const { return coefficients[0]; }

  /// Calls fn(mask, value) for every coefficient of this node's band, in
  /// increasing mask order.
  template <typename F>
  void for_each_coefficient(F&& fn) const {
    const int n = photons_total;
    const int w = n - level;
    if (w == 0) {
      fn(SubsetMask{0}, coefficients[0]);
      return;
    }
    for (SubsetMask j = first_combination(w); !combination_exhausted(j, n);
         j = next_combination(j)) {
      fn(j, coefficients[j]);
    }
  }
};

/// Return false to abort the traversal.
using NodeVisitor = std::function<bool(const NodeEvent&)>;

/**
 * @brief Optional matrix replacement fired on every push.
 *
 * Called with the state after the push, the pushed mode (zero-based) and the
 * new level.  Returning a matrix makes it the effective interferometer for
 * this push and its whole subtree (the engine restores the previous matrix
 * on backtrack); returning nullopt keeps the current one.  The replacement
 * must agree with the current matrix on every row of a mode already present
 * in the state, otherwise ancestor coefficients would be stale.
 */
using MatrixUpdateHook =
    std::function<std::optional<ComplexMatrix>(const FockState&, int mode, int level)>;

struct TraversalStats {
  std::uint64_t complex_ops = 0;        // multiply + add each counted once
  std::uint64_t coefficient_slots = 0;  // allocated coefficients (always 2^n)
  std::uint64_t events = 0;
  std::uint64_t leaves = 0;
};

/**
 * @brief Depth-first traversal of the derivative lattice.
 *
 * Owns the single 2^n coefficient vector.  Construction refuses with
 * budget_error if 2^n slots exceed the byte budget, and with
 * std::invalid_argument for n < 0 or n > kMaxPhotons.
 */
class LatticeTraversal {
 public:
  LatticeTraversal(const ComplexMatrix& u, int n,
                   std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes);

  /**
   * @brief Run the walk, visiting every node of the lattice except the root.
   *
   * Children of a node are explored in ascending mode order, and a node's
   * mode multiset is only ever built in non-decreasing order, so each of the
   * binomial(n+m, n) - 1 non-root nodes is visited exactly once.  Returns
   * false iff the visitor aborted.
   */
  bool run(const NodeVisitor& visitor);

  /// Same walk with a per-push matrix replacement hook (may be null).
  bool run(const NodeVisitor& visitor, const MatrixUpdateHook& hook);

  const std::vector<cplx>& coefficients() const { return v_; }
  const TraversalStats& stats() const { return stats_; }
  int photons() const { return n_; }
  int modes() const { return m_; }

 private:
  bool descend(int level, int min_mode, const MatrixUpdateHook& hook,
               const NodeVisitor& visitor);

  ComplexMatrix base_;
  const ComplexMatrix* current_;
  std::vector<const ComplexMatrix*> matrix_stack_;
  std::vector<ComplexMatrix> owned_replacements_;
  int n_ = 0;
  int m_ = 0;
  std::vector<cplx> v_;
  FockState state_;
  TraversalStats stats_;
};

/**
 * @brief Stream all n-photon amplitudes for the input with one photon in
 *        each of the first n modes.
 *
 * Yields exactly binomial(n+m-1, n) (state, amplitude) pairs in depth-first
 * leaf order; the sink returns false to stop early.  Returns false iff the
 * sink stopped the run.  Stats are written through stats_out when non-null.
 */
bool iterate_amplitudes(const ComplexMatrix& u, int n,
                        const std::function<bool(const FockState&, cplx)>& sink,
                        std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
                        TraversalStats* stats_out = nullptr);

/// Convenience collector over iterate_amplitudes.
std::map<FockState, cplx> full_distribution_lattice(
    const ComplexMatrix& u, int n, std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes,
    TraversalStats* stats_out = nullptr);

/// Working-set size of a traversal: exactly 2^n coefficient slots.
std::uint64_t peak_memory_coefficients(int n);

}  // namespace loslap
