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

#include "loslap/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace loslap {

bool iterate_lossy(const ComplexMatrix& u, int n, double eta,
                   const std::function<bool(const FockState&, int, double)>& sink,
                   std::uint64_t memory_cap_bytes, TraversalStats* stats_out) {
  if (!sink) throw std::invalid_argument("null sink");
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("loss probability outside [0, 1]");
  }
  LatticeTraversal traversal(u, n, memory_cap_bytes);
  // The root is not a traversal event, so the all-photons-lost outcome goes
  // out by hand; its probability is eta^n since the vacuum permanent is 1.
  bool completed = sink(FockState::vacuum(traversal.modes()), 0, std::pow(eta, n));
  if (completed && n > 0) {
    completed = traversal.run([&](const NodeEvent& ev) {
      double survivor_weight = 0.0;
      ev.for_each_coefficient(
          [&](SubsetMask, cplx c) { survivor_weight += std::norm(c); });
      const double p = std::pow(eta, n - ev.level) * std::pow(1.0 - eta, ev.level) *
                       survivor_weight / factorial_product(ev.state);
      return sink(ev.state, ev.level, p);
    });
  }
  if (stats_out != nullptr) *stats_out = traversal.stats();
  return completed;
}

std::map<FockState, double> lossy_distribution(const ComplexMatrix& u, int n, double eta,
                                               std::uint64_t memory_cap_bytes,
                                               TraversalStats* stats_out) {
  std::map<FockState, double> out;
  iterate_lossy(
      u, n, eta,
      [&](const FockState& s, int, double p) {
        out.emplace(s, p);
        return true;
      },
      memory_cap_bytes, stats_out);
  return out;
}

std::map<FockState, double> distinguishable_distribution(const ComplexMatrix& u, int n,
                                                         const PhotonGroups& groups,
                                                         std::uint64_t memory_cap_bytes,
                                                         std::uint64_t convolution_budget) {
  if (n < 0 || n > kMaxPhotons) {
    throw std::invalid_argument("photon count outside 0.." + std::to_string(kMaxPhotons));
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const std::vector<int>& group : groups) {
    if (group.empty()) throw std::invalid_argument("empty photon group");
    for (const int col : group) {
      if (col < 1 || col > n) {
        throw std::invalid_argument("photon column " + std::to_string(col) + " outside 1.." +
                                    std::to_string(n));
      }
      if (seen[col - 1]) {
        throw std::invalid_argument("photon column " + std::to_string(col) + " listed twice");
      }
      seen[col - 1] = 1;
    }
  }
  for (int col = 1; col <= n; ++col) {
    if (!seen[col - 1]) {
      throw std::invalid_argument("photon column " + std::to_string(col) + " missing from groups");
    }
  }

  LatticeTraversal traversal(u, n, memory_cap_bytes);
  const int m = traversal.modes();
  if (n == 0) return {{FockState::vacuum(m), 1.0}};

  std::vector<SubsetMask> group_mask(groups.size(), 0);
  std::vector<int> group_size(groups.size(), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const int col : groups[g]) group_mask[g] |= SubsetMask{1} << (col - 1);
    group_size[g] = static_cast<int>(groups[g].size());
  }

  // Each group interferes as if every other column were lost, so its output
  // distribution is read from the coefficient whose consumed columns are
  // exactly the group's columns, at each node of the group's photon count.
  const SubsetMask full = (SubsetMask{1} << n) - 1;
  std::vector<std::map<FockState, double>> dist(groups.size());
  traversal.run([&](const NodeEvent& ev) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (group_size[g] != ev.level) continue;
      const double p =
          std::norm(ev.coefficients[full ^ group_mask[g]]) / factorial_product(ev.state);
      if (p != 0.0) dist[g].emplace(ev.state, p);
    }
    return true;
  });

  std::uint64_t entries = 1;
  for (const auto& d : dist) {
    if (__builtin_mul_overflow(entries, static_cast<std::uint64_t>(d.size()), &entries) ||
        entries > convolution_budget) {
      throw budget_error("convolving the group distributions exceeds the budget of " +
                         std::to_string(convolution_budget) + " entries");
    }
  }

  std::map<FockState, double> acc{{FockState::vacuum(m), 1.0}};
  for (const auto& d : dist) {
    std::map<FockState, double> next;
    for (const auto& [s1, p1] : acc) {
      for (const auto& [s2, p2] : d) {
        FockState sum = s1;
        for (int i = 0; i < m; ++i) sum.occupations[i] += s2.occupations[i];
        next[sum] += p1 * p2;
      }
    }
    acc.swap(next);
  }
  return acc;
}

std::map<FockState, cplx> multiphoton_distribution(const ComplexMatrix& u, int n, bool doubled,
                                                   std::uint64_t memory_cap_bytes,
                                                   TraversalStats* stats_out) {
  if (!doubled) return full_distribution_lattice(u, n, memory_cap_bytes, stats_out);
  if (n < 0 || n * 2 > kMaxPhotons) {
    throw std::invalid_argument("doubled photon count outside 0.." + std::to_string(kMaxPhotons));
  }
  if (u.cols() < static_cast<std::size_t>(n)) {
    throw std::invalid_argument("photon count exceeds column count");
  }
  ComplexMatrix repeated(u.rows(), static_cast<std::size_t>(2 * n));
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (int j = 0; j < n; ++j) {
      repeated(i, 2 * j) = u(i, j);
      repeated(i, 2 * j + 1) = u(i, j);
    }
  }
  std::map<FockState, cplx> out =
      full_distribution_lattice(repeated, 2 * n, memory_cap_bytes, stats_out);
  // two photons per column: the input normalization contributes 1/sqrt(2!^n)
  const double scale = 1.0 / std::sqrt(std::ldexp(1.0, n));
  for (auto& [state, amp] : out) amp *= scale;
  return out;
}

}  // namespace loslap
