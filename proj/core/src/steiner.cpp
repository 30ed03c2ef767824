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

#include "loslap/steiner.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace loslap {

namespace {

void check_partition(const Partition& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1) throw std::invalid_argument("partition parts must be positive");
    if (i > 0 && p[i] > p[i - 1]) throw std::invalid_argument("partition parts must not increase");
  }
}

int partition_level(const Partition& p) {
  int total = 0;
  for (int part : p) total += part;
  return total;
}

/// Per-member update cost at depth `level` of an n-photon walk.
mpz_class member_cost(int n, int level) {
  if (level == 0) return 0;
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n - 1),
               static_cast<unsigned long>(level - 1));
  return 2 * n * c;
}

/// All partitions of k with at most max_parts parts, sorted lexicographically.
std::vector<Partition> partitions_of(int k, int max_parts) {
  std::vector<Partition> out;
  Partition prefix;
  const std::function<void(int, int)> gen = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(prefix);
      return;
    }
    if (static_cast<int>(prefix.size()) >= max_parts) return;
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      prefix.push_back(part);
      gen(remaining - part, part);
      prefix.pop_back();
    }
  };
  gen(k, k);
  std::sort(out.begin(), out.end());
  return out;
}

constexpr std::uint64_t kInfiniteCost = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t sum = 0;
  if (a == kInfiniteCost || b == kInfiniteCost || __builtin_add_overflow(a, b, &sum)) {
    return kInfiniteCost;
  }
  return sum;
}

mpz_class plan_weight_from_members(const PartitionGraph& g,
                                   const std::map<Partition, Partition>& parent_map) {
  mpz_class total = 0;
  for (const auto& [child, parent] : parent_map) {
    (void)parent;
    total += g.nodes[g.index_of(child)].weight;
  }
  return total;
}

}  // namespace

std::string format_partition(const Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(p[i]);
  }
  return out;
}

Partition parse_partition(const std::string& text) {
  Partition p;
  if (text.empty()) return p;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string token = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (token.empty()) throw std::invalid_argument("empty partition part in '" + text + "'");
    char* end = nullptr;
    const long value = std::strtol(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || value < 1) {
      throw std::invalid_argument("bad partition part '" + token + "'");
    }
    p.push_back(static_cast<int>(value));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  check_partition(p);
  return p;
}

mpz_class class_size(const Partition& p, int m) {
  check_partition(p);
  if (m < 1) throw std::invalid_argument("mode count must be positive");
  const int parts = static_cast<int>(p.size());
  if (parts > m) return 0;
  mpz_class size = 1;
  for (int i = 0; i < parts; ++i) size *= m - i;  // falling factorial m! / (m - parts)!
  std::size_t i = 0;
  while (i < p.size()) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(j - i));
    mpz_divexact(size.get_mpz_t(), size.get_mpz_t(), fact.get_mpz_t());
    i = j;
  }
  return size;
}

std::uint64_t partition_count(int k) {
  if (k < 0) throw std::invalid_argument("negative partition argument");
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(k) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= k; ++part) {
    for (int s = part; s <= k; ++s) ways[s] += ways[s - part];
  }
  return ways[k];
}

std::uint64_t partition_graph_node_count(int n) {
  if (n < 0) throw std::invalid_argument("negative photon count");
  std::uint64_t total = 0;
  for (int k = 0; k <= n; ++k) total += partition_count(k);
  return total;
}

mpz_class lattice_node_count(int n, int m) {
  if (n < 0 || m < 1) throw std::invalid_argument("need n >= 0 and m >= 1");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n + m), static_cast<unsigned long>(n));
  return c;
}

int PartitionGraph::index_of(const Partition& p) const {
  const auto it = index.find(p);
  if (it == index.end()) {
    throw std::out_of_range("partition not in graph: '" + format_partition(p) + "'");
  }
  return it->second;
}

mpz_class PartitionGraph::full_weight() const {
  mpz_class total = 0;
  for (const PartitionNode& node : nodes) total += node.weight;
  return total;
}

PartitionGraph build_partition_graph(int n, int m) {
  if (n < 0 || m < 1) throw std::invalid_argument("need n >= 0 and m >= 1");
  PartitionGraph g;
  g.n = n;
  g.m = m;
  for (int level = 0; level <= n; ++level) {
    for (Partition& p : partitions_of(level, m)) {
      PartitionNode node;
      node.level = level;
      node.weight = level == 0 ? mpz_class(0) : member_cost(n, level) * class_size(p, m);
      node.partition = std::move(p);
      g.index.emplace(node.partition, static_cast<int>(g.nodes.size()));
      g.nodes.push_back(std::move(node));
    }
  }
  for (int id = 0; id < static_cast<int>(g.nodes.size()); ++id) {
    const PartitionNode& node = g.nodes[id];
    if (node.level == n) {
      g.terminals.push_back(id);
      continue;
    }
    // children: raise one part by one, or open a new part of size one
    std::set<Partition> children;
    for (std::size_t i = 0; i < node.partition.size(); ++i) {
      if (i > 0 && node.partition[i] == node.partition[i - 1]) continue;
      Partition child = node.partition;
      ++child[i];
      children.insert(std::move(child));
    }
    if (static_cast<int>(node.partition.size()) < m) {
      Partition child = node.partition;
      child.push_back(1);
      children.insert(std::move(child));
    }
    for (const Partition& child : children) {
      const int child_id = g.index_of(child);
      g.nodes[id].children.push_back(child_id);
      g.nodes[child_id].parents.push_back(id);
    }
  }
  return g;
}

TraversalPlan solve_exact(const PartitionGraph& g, int terminal_cap) {
  TraversalPlan plan;
  plan.n = g.n;
  plan.m = g.m;
  plan.total_weight = 0;
  if (g.n == 0) return plan;  // the root is the only terminal

  const int node_count = static_cast<int>(g.nodes.size());
  const int t = static_cast<int>(g.terminals.size());
  if (t > terminal_cap) {
    throw budget_error("exact solve over " + std::to_string(t) + " terminals exceeds the cap of " +
                       std::to_string(terminal_cap) + "; use solve_greedy instead");
  }
  if (!g.full_weight().fits_ulong_p()) {
    throw budget_error("class weights exceed the 64-bit range of the exact solver; "
                       "use solve_greedy instead");
  }
  std::vector<std::uint64_t> weight(node_count);
  for (int v = 0; v < node_count; ++v) weight[v] = g.nodes[v].weight.get_ui();

  // dp[S * V + v]: cheapest tree hanging below v that reaches terminal set S,
  // v's own weight excluded.  Subsets are filled in increasing mask order
  // (all strict subsets precede their superset); within a subset, a single
  // reverse level-major sweep closes min-cost paths because every edge goes
  // one level down.
  const std::size_t subset_count = std::size_t{1} << t;
  std::vector<std::uint64_t> dp(subset_count * node_count, kInfiniteCost);
  std::vector<std::uint64_t> merged(node_count);
  for (int i = 0; i < t; ++i) {
    dp[(std::size_t{1} << i) * node_count + g.terminals[i]] = 0;
  }
  for (std::size_t s = 1; s < subset_count; ++s) {
    std::uint64_t* row = dp.data() + s * node_count;
    if (std::popcount(s) >= 2) {
      std::fill(merged.begin(), merged.end(), kInfiniteCost);
      const std::size_t anchor = s & (~s + 1);
      for (std::size_t sub = (s - 1) & s; sub != 0; sub = (sub - 1) & s) {
        if ((sub & anchor) == 0) continue;  // each split visited once
        const std::uint64_t* left = dp.data() + sub * node_count;
        const std::uint64_t* right = dp.data() + (s ^ sub) * node_count;
        for (int v = 0; v < node_count; ++v) {
          const std::uint64_t sum = saturating_add(left[v], right[v]);
          if (sum < merged[v]) merged[v] = sum;
        }
      }
      std::copy(merged.begin(), merged.end(), row);
    }
    for (int v = node_count - 1; v >= 0; --v) {
      for (const int c : g.nodes[v].children) {
        const std::uint64_t through = saturating_add(row[c], weight[c]);
        if (through < row[v]) row[v] = through;
      }
    }
  }

  const std::size_t all = subset_count - 1;
  if (dp[all * node_count + 0] == kInfiniteCost) {
    throw std::logic_error("no arborescence covers the terminals");  // cannot happen
  }

  // Walk the table back: prefer the lexicographically first child extension,
  // then the smallest splitting submask.  Equal-cost decompositions are all
  // optimal, so any deterministic preference is fine.
  const std::function<void(std::size_t, int)> backtrack = [&](std::size_t s, int v) {
    while (true) {
      if (std::popcount(s) == 1) {
        const int bit = std::countr_zero(s);
        if (g.terminals[bit] == v) return;
      }
      const std::uint64_t target = dp[s * node_count + v];
      bool extended = false;
      for (const int c : g.nodes[v].children) {
        if (saturating_add(dp[s * node_count + c], weight[c]) == target) {
          const auto [it, inserted] =
              plan.parent_map.emplace(g.nodes[c].partition, g.nodes[v].partition);
          if (!inserted && it->second != g.nodes[v].partition) {
            throw std::logic_error("conflicting parents in plan reconstruction");
          }
          v = c;
          extended = true;
          break;
        }
      }
      if (extended) continue;
      const std::size_t anchor = s & (~s + 1);
      bool split = false;
      for (std::size_t sub = (s - 1) & s; sub != 0; sub = (sub - 1) & s) {
        if ((sub & anchor) == 0) continue;
        if (saturating_add(dp[sub * node_count + v], dp[(s ^ sub) * node_count + v]) == target) {
          backtrack(sub, v);
          s ^= sub;
          split = true;
          break;
        }
      }
      if (!split) throw std::logic_error("unreconstructible entry in plan table");
    }
  };
  backtrack(all, 0);

  plan.total_weight = plan_weight_from_members(g, plan.parent_map);
  if (plan.total_weight != mpz_class(static_cast<unsigned long>(dp[all * node_count + 0]))) {
    throw std::logic_error("reconstructed plan weight disagrees with the table optimum");
  }
  return plan;
}

TraversalPlan solve_greedy(const PartitionGraph& g) {
  TraversalPlan plan;
  plan.n = g.n;
  plan.m = g.m;
  plan.total_weight = 0;
  if (g.n == 0) return plan;

  const int node_count = static_cast<int>(g.nodes.size());
  std::vector<char> selected(node_count, 0);
  selected[0] = 1;  // the root costs nothing and is always present
  std::vector<int> remaining = g.terminals;

  const mpz_class unreachable = -1;
  std::vector<mpz_class> cost(node_count);
  std::vector<int> via(node_count);
  while (!remaining.empty()) {
    // cheapest residual path from the selected set down to each node
    for (int v = 0; v < node_count; ++v) {
      via[v] = -1;
      if (selected[v]) {
        cost[v] = 0;
        continue;
      }
      cost[v] = unreachable;
      for (const int p : g.nodes[v].parents) {
        if (cost[p] < 0) continue;
        const mpz_class through = cost[p] + g.nodes[v].weight;
        if (cost[v] < 0 || through < cost[v]) {
          cost[v] = through;
          via[v] = p;
        }
      }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < remaining.size(); ++i) {
      if (cost[remaining[i]] < cost[remaining[best]]) best = i;
    }
    int node = remaining[best];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    while (!selected[node]) {
      plan.parent_map.emplace(g.nodes[node].partition, g.nodes[via[node]].partition);
      selected[node] = 1;
      node = via[node];
    }
  }
  plan.total_weight = plan_weight_from_members(g, plan.parent_map);
  return plan;
}

TraversalPlan full_lattice_plan(const PartitionGraph& g) {
  TraversalPlan plan;
  plan.n = g.n;
  plan.m = g.m;
  for (const PartitionNode& node : g.nodes) {
    if (node.level == 0) continue;
    plan.parent_map.emplace(node.partition, g.nodes[node.parents.front()].partition);
  }
  plan.total_weight = g.full_weight();
  return plan;
}

TraversalPlan reweight_plan(const TraversalPlan& plan, int new_m) {
  if (new_m < 1) throw std::invalid_argument("mode count must be positive");
  TraversalPlan out;
  out.n = plan.n;
  out.m = new_m;
  out.parent_map = plan.parent_map;
  out.total_weight = 0;
  for (const auto& [child, parent] : plan.parent_map) {
    (void)parent;
    const mpz_class size = class_size(child, new_m);
    if (size == 0) {
      throw std::invalid_argument("partition '" + format_partition(child) + "' needs more than " +
                                  std::to_string(new_m) + " modes");
    }
    out.total_weight += member_cost(plan.n, partition_level(child)) * size;
  }
  return out;
}

namespace {

struct PlanClass {
  std::vector<std::pair<const PlanClass*, int>> children;  // child class, raised value
  int level = 0;
};

/// The occupation value whose count goes up by one along edge parent->child
/// (the raised part minus one; 0 when the edge opens a new part).
int raised_value(const Partition& parent, const Partition& child) {
  std::map<int, int> diff;
  for (const int part : child) ++diff[part];
  for (const int part : parent) --diff[part];
  for (auto it = diff.begin(); it != diff.end();) {
    it = it->second == 0 ? diff.erase(it) : std::next(it);
  }
  if (diff.size() == 1 && diff.begin()->first == 1 && diff.begin()->second == 1) return 0;
  if (diff.size() == 2) {
    const auto lo = diff.begin();
    const auto hi = std::next(lo);
    if (lo->second == -1 && hi->second == 1 && hi->first == lo->first + 1) return lo->first;
  }
  throw std::invalid_argument("plan edge '" + format_partition(parent) + "' -> '" +
                              format_partition(child) + "' is not a single-photon refinement");
}

}  // namespace

PlanExecutionStats execute_plan(const ComplexMatrix& u, const TraversalPlan& plan,
                                const std::function<bool(const FockState&, cplx)>& sink,
                                std::uint64_t memory_cap_bytes) {
  if (!sink) throw std::invalid_argument("null sink");
  if (u.rows() != static_cast<std::size_t>(plan.m)) {
    throw std::invalid_argument("matrix row count does not match the plan's mode count");
  }
  const int n = plan.n;
  const int m = plan.m;
  if (n < 0 || n > kMaxPhotons) {
    throw std::invalid_argument("photon count outside 0.." + std::to_string(kMaxPhotons));
  }
  if (u.cols() < static_cast<std::size_t>(n)) {
    throw std::invalid_argument("photon count exceeds column count");
  }

  // Rebuild the class tree and derive each edge's raised value up front so a
  // malformed plan is rejected before any numeric work.
  std::map<Partition, PlanClass> classes;
  classes[Partition{}].level = 0;
  for (const auto& [child, parent] : plan.parent_map) {
    (void)parent;
    check_partition(child);
    if (child.empty()) throw std::invalid_argument("plan lists the root as a child");
    if (static_cast<int>(child.size()) > m) {
      throw std::invalid_argument("partition '" + format_partition(child) + "' needs more than " +
                                  std::to_string(m) + " modes");
    }
    const int level = partition_level(child);
    if (level > n) {
      throw std::invalid_argument("partition '" + format_partition(child) + "' exceeds " +
                                  std::to_string(n) + " photons");
    }
    classes[child].level = level;
  }
  for (const auto& [child, parent] : plan.parent_map) {
    const auto parent_it = classes.find(parent);
    if (parent_it == classes.end()) {
      throw std::invalid_argument("plan parent '" + format_partition(parent) +
                                  "' is not itself planned");
    }
    parent_it->second.children.emplace_back(&classes.at(child), raised_value(parent, child));
  }

  PlanExecutionStats stats;
  const std::uint64_t slots = std::uint64_t{1} << n;
  if (slots > memory_cap_bytes / kBytesPerCoefficientSlot) {
    throw budget_error("replay needs " + std::to_string(slots) + " coefficient slots (" +
                       std::to_string(slots) + " * " + std::to_string(kBytesPerCoefficientSlot) +
                       " bytes) which exceeds the budget of " + std::to_string(memory_cap_bytes) +
                       " bytes");
  }
  std::vector<cplx> v(slots, cplx{});
  v[slots - 1] = cplx{1.0, 0.0};
  FockState state = FockState::vacuum(m);

  if (n == 0) {
    ++stats.leaf_visits;
    sink(state, cplx{1.0, 0.0});
    return stats;
  }

  // Visit the members of each planned class.  Raising mode j from value w to
  // w+1 is allowed only when j is larger than every mode currently at w+1,
  // so each member of the child class is reached from exactly one member of
  // the parent class (the one obtained by demoting its largest mode at w+1).
  const std::function<bool(const PlanClass&)> walk = [&](const PlanClass& cls) -> bool {
    if (cls.level == n) {
      ++stats.leaf_visits;
      return sink(state, v[0] / normalization_factor(state));
    }
    for (const auto& [child, raised] : cls.children) {
      int bar = -1;
      for (int j = 0; j < m; ++j) {
        if (state.occupations[j] == raised + 1) bar = j;
      }
      for (int j = bar + 1; j < m; ++j) {
        if (state.occupations[j] != raised) continue;
        ++state.occupations[j];
        update_coefficients(u, j, cls.level + 1, v, &stats.complex_ops);
        ++stats.node_visits;
        const bool alive = walk(*child);
        --state.occupations[j];
        if (!alive) return false;
      }
    }
    return true;
  };
  walk(classes.at(Partition{}));
  return stats;
}

}  // namespace loslap
