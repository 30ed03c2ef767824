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

#include "loslap/lattice.hpp"

#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

namespace loslap {

void update_coefficients(const ComplexMatrix& u, int mode, int level, std::vector<cplx>& v,
                         std::uint64_t* ops) {
  if (v.empty() || !std::has_single_bit(v.size())) {
    throw std::invalid_argument("coefficient vector size must be a power of two");
  }
  const int n = std::countr_zero(v.size());
  if (level < 1 || level > n) throw std::invalid_argument("level outside 1..n");
  if (mode < 0 || static_cast<std::size_t>(mode) >= u.rows()) {
    throw std::invalid_argument("mode outside the matrix rows");
  }
  if (u.cols() < static_cast<std::size_t>(n)) {
    throw std::invalid_argument("matrix has fewer columns than photons");
  }

  const cplx* row = &u(mode, 0);
  const int w = n - level;
  std::uint64_t local_ops = 0;
  // Each index of the child band reads its `level` parents: for every pending
  // set j, the consumed columns are the cleared bits, and expanding the new
  // row across them gives v[j] from the band one popcount above.
  const auto gather = [&](SubsetMask j) {
    cplx acc{};
    SubsetMask consumed = ~j & ((SubsetMask{1} << n) - 1);
    while (consumed != 0) {
      const int p = std::countr_zero(consumed);
      consumed &= consumed - 1;
      acc += row[p] * v[j | (SubsetMask{1} << p)];
      local_ops += 2;
    }
    v[j] = acc;
  };
  if (w == 0) {
    gather(SubsetMask{0});
  } else {
    for (SubsetMask j = first_combination(w); !combination_exhausted(j, n);
         j = next_combination(j)) {
      gather(j);
    }
  }
  if (ops != nullptr) *ops += local_ops;
}

LatticeTraversal::LatticeTraversal(const ComplexMatrix& u, int n, std::uint64_t memory_cap_bytes)
    : base_(u) {
  if (u.rows() == 0) throw std::invalid_argument("empty matrix");
  if (n < 0 || n > kMaxPhotons) {
    throw std::invalid_argument("photon count outside 0.." + std::to_string(kMaxPhotons));
  }
  if (u.cols() < static_cast<std::size_t>(n)) {
    throw std::invalid_argument("photon count exceeds column count");
  }
  n_ = n;
  m_ = static_cast<int>(u.rows());
  const std::uint64_t slots = std::uint64_t{1} << n_;
  if (slots > memory_cap_bytes / kBytesPerCoefficientSlot) {
    throw budget_error("traversal needs " + std::to_string(slots) + " coefficient slots (" +
                       std::to_string(slots) + " * " + std::to_string(kBytesPerCoefficientSlot) +
                       " bytes) which exceeds the budget of " + std::to_string(memory_cap_bytes) +
                       " bytes");
  }
  v_.assign(slots, cplx{});
  v_[slots - 1] = cplx{1.0, 0.0};  // the root: a 0x0 permanent
  state_ = FockState::vacuum(m_);
  current_ = &base_;
  matrix_stack_.push_back(&base_);
  owned_replacements_.reserve(static_cast<std::size_t>(n_));
  stats_.coefficient_slots = slots;
}

bool LatticeTraversal::run(const NodeVisitor& visitor) { return run(visitor, MatrixUpdateHook{}); }

bool LatticeTraversal::run(const NodeVisitor& visitor, const MatrixUpdateHook& hook) {
  if (!visitor) throw std::invalid_argument("null visitor");
  stats_.complex_ops = 0;
  stats_.events = 0;
  stats_.leaves = 0;
  state_ = FockState::vacuum(m_);
  owned_replacements_.clear();
  matrix_stack_.assign(1, &base_);
  current_ = &base_;
  if (n_ == 0) return true;  // the lattice is just the root
  return descend(1, 0, hook, visitor);
}

bool LatticeTraversal::descend(int level, int min_mode, const MatrixUpdateHook& hook,
                               const NodeVisitor& visitor) {
  const bool leaf = level == n_;
  for (int mode = min_mode; mode < m_; ++mode) {
    ++state_.occupations[mode];
    bool switched = false;
    if (hook) {
      std::optional<ComplexMatrix> replacement = hook(state_, mode, level);
      if (replacement.has_value()) {
        if (replacement->rows() != static_cast<std::size_t>(m_) ||
            replacement->cols() < static_cast<std::size_t>(n_)) {
          --state_.occupations[mode];
          throw std::invalid_argument("replacement matrix shape does not match the traversal");
        }
        // reserve() in the constructor keeps these pointers stable
        owned_replacements_.push_back(std::move(*replacement));
        current_ = &owned_replacements_.back();
        matrix_stack_.push_back(current_);
        switched = true;
      }
    }
    update_coefficients(*current_, mode, level, v_, &stats_.complex_ops);
    ++stats_.events;
    if (leaf) ++stats_.leaves;
    bool alive = visitor(NodeEvent{state_, level, n_, leaf, v_});
    if (alive && !leaf) alive = descend(level + 1, mode, hook, visitor);
    if (switched) {
      matrix_stack_.pop_back();
      current_ = matrix_stack_.back();
      owned_replacements_.pop_back();
    }
    --state_.occupations[mode];
    if (!alive) return false;
  }
  return true;
}

bool iterate_amplitudes(const ComplexMatrix& u, int n,
                        const std::function<bool(const FockState&, cplx)>& sink,
                        std::uint64_t memory_cap_bytes, TraversalStats* stats_out) {
  if (!sink) throw std::invalid_argument("null sink");
  LatticeTraversal traversal(u, n, memory_cap_bytes);
  bool completed;
  if (n == 0) {
    completed = sink(FockState::vacuum(traversal.modes()), cplx{1.0, 0.0});
  } else {
    completed = traversal.run([&](const NodeEvent& ev) {
      if (!ev.is_leaf) return true;
      return sink(ev.state, ev.leaf_coefficient() / normalization_factor(ev.state));
    });
  }
  if (stats_out != nullptr) *stats_out = traversal.stats();
  return completed;
}

std::map<FockState, cplx> full_distribution_lattice(const ComplexMatrix& u, int n,
                                                    std::uint64_t memory_cap_bytes,
                                                    TraversalStats* stats_out) {
  std::map<FockState, cplx> out;
  iterate_amplitudes(
      u, n,
      [&](const FockState& s, cplx a) {
        out.emplace(s, a);
        return true;
      },
      memory_cap_bytes, stats_out);
  return out;
}

std::uint64_t peak_memory_coefficients(int n) {
  if (n < 0 || n > kMaxPhotons) {
    throw std::invalid_argument("photon count outside 0.." + std::to_string(kMaxPhotons));
  }
  return std::uint64_t{1} << n;
}

}  // namespace loslap
