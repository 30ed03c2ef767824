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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "loslap/budget.hpp"
#include "loslap/fock.hpp"
#include "loslap/lattice.hpp"
#include "loslap/matrix.hpp"

namespace loslap {

/**
 * Mode labels are interchangeable in the derivative lattice: two nodes whose
 * occupation multisets coincide carry permanents of relabelled submatrices
 * and cost the same to expand.  Collapsing each equivalence class to its
 * integer partition gives a graph small enough to optimize over: pick which
 * classes to visit (a Steiner arborescence from the empty partition to all
 * partitions of n) and replay the choice on the full lattice.
 */

/// Non-increasing positive parts; the empty vector is the root (level 0).
using Partition = std::vector<int>;

std::string format_partition(const Partition& p);   // "2,1"; "" for the root
Partition parse_partition(const std::string& text);

/// Number of occupation vectors over m modes whose multiset of non-zero
/// entries is exactly p: m! / ((m - parts)! * prod_v multiplicity_v!).
/// Zero when p has more parts than modes.
mpz_class class_size(const Partition& p, int m);

/// p(k), the number of partitions of k.
std::uint64_t partition_count(int k);

/// Total nodes of the partition graph for n photons (no mode pruning):
/// sum of p(k) for k = 0..n.
std::uint64_t partition_graph_node_count(int n);

/// Nodes of the full derivative lattice including the root: binomial(n+m, n).
mpz_class lattice_node_count(int n, int m);

struct PartitionNode {
  Partition partition;
  int level = 0;
  /// Cost of the whole class: 2n * binomial(n-1, level-1) complex operations
  /// per member, times class_size(partition, m).  Zero for the root.  Every
  /// edge into this node carries this weight, since the expense of an edge
  /// is computing the child's members.
  mpz_class weight;
  std::vector<int> children;
  std::vector<int> parents;
};

/**
 * @brief The partition graph: one node per partition of 0..n with at most m
 *        parts, edges from each partition to every partition reachable by
 *        incrementing one part (or appending a part of size 1).
 */
struct PartitionGraph {
  int n = 0;
  int m = 0;
  std::vector<PartitionNode> nodes;  // level-major, lexicographic within level
  std::vector<int> terminals;        // node ids at level n
  std::map<Partition, int> index;

  int index_of(const Partition& p) const;
  /// Weight of visiting everything: equals the full-lattice operation count.
  mpz_class full_weight() const;
};

PartitionGraph build_partition_graph(int n, int m);

/**
 * @brief An arborescence on the partition graph: every listed partition maps
 *        to its parent, the root (empty partition) excluded.  total_weight
 *        is the sum of member weights of all listed partitions.
 */
struct TraversalPlan {
  int n = 0;
  int m = 0;
  std::map<Partition, Partition> parent_map;
  mpz_class total_weight;
};

/// Largest terminal count the exact solver accepts by default; beyond it the
/// subset dynamic program is refused (p(8) = 22 keeps n <= 8 admissible).
inline constexpr int kDefaultSteinerTerminalCap = 22;

/**
 * @brief Minimum-weight Steiner arborescence from the root to all terminals.
 *
 * Dynamic program over terminal subsets with a bottom-up closure pass per
 * subset (the graph is layered, so shortest paths need one sweep).  Ties are
 * broken deterministically by lexicographic node order.  Throws budget_error
 * when the terminal count exceeds terminal_cap; callers may fall back to
 * solve_greedy.
 */
TraversalPlan solve_exact(const PartitionGraph& g, int terminal_cap = kDefaultSteinerTerminalCap);

/**
 * @brief Cheapest-path-first heuristic: repeatedly connects the terminal
 *        whose residual path cost (already-chosen nodes are free) is
 *        smallest.  Upper-bounds the optimum and never exceeds the full
 *        lattice weight.
 */
TraversalPlan solve_greedy(const PartitionGraph& g);

/// The degenerate plan containing every partition class.
TraversalPlan full_lattice_plan(const PartitionGraph& g);

/// Same arborescence re-costed for a different mode count (parts must still
/// fit: new_m >= largest part count in the plan).
TraversalPlan reweight_plan(const TraversalPlan& plan, int new_m);

struct PlanExecutionStats {
  std::uint64_t complex_ops = 0;
  std::uint64_t node_visits = 0;
  std::uint64_t leaf_visits = 0;
};

/**
 * @brief Replay a plan on the full lattice of an m-by-n interferometer.
 *
 * Keeps the per-exponent mode sets of the current node; for each plan child
 * of the current class, moves one mode up one exponent.  A mode may only
 * join an exponent set whose present members are all smaller (canonical
 * filling), which makes every member of every planned class — and in
 * particular every leaf — be visited exactly once.  The measured complex-op
 * count equals the plan's total weight.
 *
 * The sink receives (state, amplitude) for each leaf; returning false stops
 * the run.  u.rows() must equal plan.m.
 */
PlanExecutionStats execute_plan(const ComplexMatrix& u, const TraversalPlan& plan,
                                const std::function<bool(const FockState&, cplx)>& sink,
                                std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes);

}  // namespace loslap
