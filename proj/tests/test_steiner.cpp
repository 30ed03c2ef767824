#include <stdexcept>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "loslap/costmodel.hpp"
#include "loslap/lattice.hpp"
#include "loslap/matrix.hpp"
#include "loslap/steiner.hpp"
#include "oracles.hpp"

using namespace loslap;

namespace {

std::map<FockState, cplx> run_plan(const ComplexMatrix& u, const TraversalPlan& plan,
                                   PlanExecutionStats* stats = nullptr) {
  std::map<FockState, cplx> out;
  PlanExecutionStats st = execute_plan(u, plan, [&](const FockState& s, cplx a) {
    const bool fresh = out.emplace(s, a).second;
    CHECK(fresh);  // each leaf exactly once
    return true;
  });
  if (stats != nullptr) *stats = st;
  return out;
}

}  // namespace

TEST_CASE("partition text form round-trips") {
  CHECK(format_partition({}) == "");
  CHECK(format_partition({2, 1}) == "2,1");
  CHECK(parse_partition("") == Partition{});
  CHECK(parse_partition("3,1,1") == Partition{3, 1, 1});
  CHECK_THROWS_AS(parse_partition("1,2"), std::invalid_argument);  // increasing
  CHECK_THROWS_AS(parse_partition("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_partition("2,x"), std::invalid_argument);
}

TEST_CASE("class sizes count monomials with a given exponent multiset") {
  CHECK(class_size({3}, 3) == 3);
  CHECK(class_size({1, 1}, 3) == 3);
  CHECK(class_size({2, 1}, 3) == 6);
  CHECK(class_size({1, 1, 1, 1}, 3) == 0);  // more parts than modes
  // summing class sizes over all partitions of k recovers stars-and-bars
  for (int m = 1; m <= 8; ++m) {
    for (int k = 0; k <= 6; ++k) {
      mpz_class total = 0;
      const PartitionGraph g = build_partition_graph(std::max(k, 1), m);
      for (const PartitionNode& node : g.nodes) {
        if (node.level == k) total += class_size(node.partition, m);
      }
      CHECK(total == binomial(static_cast<unsigned long>(m + k - 1), static_cast<unsigned long>(k)));
    }
  }
}

TEST_CASE("node counts follow the partition-number sequence") {
  const std::uint64_t expected[] = {4, 7, 12, 19, 30, 45, 67, 97, 139, 195, 272, 373, 508};
  for (int n = 2; n <= 14; ++n) {
    CHECK(partition_graph_node_count(n) == expected[n - 2]);
    CHECK(build_partition_graph(n, n).nodes.size() == expected[n - 2]);
  }
  CHECK(partition_graph_node_count(40) == 215308);
  CHECK(lattice_node_count(5, 5) == 252);
  CHECK(lattice_node_count(8, 8) == 12870);
}

TEST_CASE("graph structure: parents differ by one raise or one appended part") {
  const PartitionGraph g = build_partition_graph(5, 5);
  std::set<int> reachable{g.index_of({})};
  for (const PartitionNode& node : g.nodes) {
    for (int child : node.children) {
      const PartitionNode& c = g.nodes[static_cast<std::size_t>(child)];
      CHECK(c.level == node.level + 1);
      if (reachable.count(g.index_of(node.partition)) != 0) reachable.insert(child);
    }
  }
  for (int t : g.terminals) {
    CHECK(g.nodes[static_cast<std::size_t>(t)].level == 5);
    CHECK(reachable.count(t) == 1);  // every terminal reachable from the root
  }
  CHECK(g.terminals.size() == partition_count(5));
  CHECK_THROWS_AS(g.index_of({9, 9}), std::out_of_range);
}

TEST_CASE("the full-lattice weight equals the traversal cost formula") {
  for (int n = 2; n <= 8; ++n) {
    for (int m = n; m <= n + 2; ++m) {
      CHECK(build_partition_graph(n, m).full_weight() == flops_loslap(n, m));
    }
  }
}

TEST_CASE("exact plans cannot beat the lattice when nothing is skippable") {
  for (int n = 2; n <= 4; ++n) {
    const PartitionGraph g = build_partition_graph(n, n);
    const TraversalPlan plan = solve_exact(g);
    CHECK(plan.total_weight == g.full_weight());
  }
}

TEST_CASE("exact beats or matches greedy which beats or matches the full walk") {
  for (int n = 2; n <= 6; ++n) {
    for (int m = n; m <= n + 1; ++m) {
      const PartitionGraph g = build_partition_graph(n, m);
      const TraversalPlan exact = solve_exact(g);
      const TraversalPlan greedy = solve_greedy(g);
      CHECK(exact.total_weight <= greedy.total_weight);
      CHECK(greedy.total_weight <= g.full_weight());
      // both plans really span all terminals
      for (int t : g.terminals) {
        CHECK(exact.parent_map.count(g.nodes[static_cast<std::size_t>(t)].partition) == 1);
        CHECK(greedy.parent_map.count(g.nodes[static_cast<std::size_t>(t)].partition) == 1);
      }
      // stored weights match an independent re-costing
      CHECK(reweight_plan(exact, m).total_weight == exact.total_weight);
      CHECK(reweight_plan(greedy, m).total_weight == greedy.total_weight);
    }
  }
}

TEST_CASE("the known optimized weight at five photons is reached") {
  const TraversalPlan plan = solve_exact(build_partition_graph(5, 5));
  CHECK(plan.total_weight == 5210);
}

TEST_CASE("the exact solver refuses oversized terminal sets") {
  const PartitionGraph g = build_partition_graph(9, 9);  // 30 terminals
  CHECK_THROWS_AS(solve_exact(g), budget_error);
  CHECK_THROWS_AS(solve_exact(build_partition_graph(3, 3), 1), budget_error);
}

TEST_CASE("plan execution reproduces the plain traversal") {
  for (int n = 2; n <= 5; ++n) {
    const ComplexMatrix u = haar_random_unitary(n, 60 + n);
    const PartitionGraph g = build_partition_graph(n, n);
    for (const TraversalPlan& plan : {solve_exact(g), solve_greedy(g), full_lattice_plan(g)}) {
      PlanExecutionStats st;
      const auto got = run_plan(u, plan, &st);
      const auto want = full_distribution_lattice(u, n);
      CHECK(got.size() == want.size());
      CHECK(testing::max_abs_diff(got, want) <= 1e-10);
      CHECK(mpz_class(st.complex_ops) == plan.total_weight);
    }
  }
}

TEST_CASE("the degenerate plan visits every lattice node once") {
  const int n = 4, m = 4;
  const ComplexMatrix u = haar_random_unitary(m, 3);
  const TraversalPlan plan = full_lattice_plan(build_partition_graph(n, m));
  PlanExecutionStats st;
  run_plan(u, plan, &st);
  CHECK(mpz_class(st.node_visits) == lattice_node_count(n, m) - 1);  // root excluded
  CHECK(st.leaf_visits == fock_state_count(m, n));
}

TEST_CASE("a square plan can be re-costed and executed on more modes") {
  const int n = 4, m = 6;
  const TraversalPlan base = solve_exact(build_partition_graph(n, n));
  const TraversalPlan wide = reweight_plan(base, m);
  CHECK(wide.m == m);
  CHECK(wide.total_weight >= base.total_weight);

  const ComplexMatrix u = haar_random_unitary(m, 19);
  PlanExecutionStats st;
  const auto got = run_plan(u, wide, &st);
  const auto want = full_distribution_lattice(u, n);
  CHECK(got.size() == want.size());
  CHECK(testing::max_abs_diff(got, want) <= 1e-10);
  CHECK(mpz_class(st.complex_ops) == wide.total_weight);

  CHECK_THROWS_AS(reweight_plan(base, 2), std::invalid_argument);  // parts no longer fit
}

TEST_CASE("plan execution can stop early") {
  const ComplexMatrix u = haar_random_unitary(4, 2);
  const TraversalPlan plan = solve_exact(build_partition_graph(4, 4));
  int seen = 0;
  execute_plan(u, plan, [&](const FockState&, cplx) { return ++seen < 3; });
  CHECK(seen == 3);
}

TEST_CASE("executing a malformed plan is rejected") {
  const ComplexMatrix u = haar_random_unitary(3, 2);
  TraversalPlan plan = solve_exact(build_partition_graph(3, 3));
  TraversalPlan orphan = plan;
  orphan.parent_map[{2, 1}] = {2};  // (2) is not itself planned
  orphan.parent_map.erase({2});
  CHECK_THROWS_AS(run_plan(u, orphan), std::invalid_argument);

  TraversalPlan wrong_m = plan;
  wrong_m.m = 4;
  CHECK_THROWS_AS(run_plan(u, wrong_m), std::invalid_argument);
}
