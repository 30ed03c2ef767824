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

#include "loslap/permanent.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace loslap {

cplx permanent(const ComplexMatrix& a, std::uint64_t* ops) {
  if (a.rows() != a.cols()) throw std::invalid_argument("permanent needs a square matrix");
  const int k = static_cast<int>(a.rows());
  if (k == 0) return cplx{1.0, 0.0};  // empty product over an empty column set
  if (k > 62) throw std::invalid_argument("permanent beyond 62 columns is not supported");

  // Inclusion-exclusion over column subsets.  Walking subsets in Gray-code
  // order updates the running row sums by a single column per step.
  std::vector<cplx> rowsum(k, cplx{});
  cplx total{};
  std::uint64_t gray = 0;
  double sign = 1.0;
  const std::uint64_t count = 1ull << k;
  std::uint64_t local_ops = 0;
  for (std::uint64_t iter = 1; iter < count; ++iter) {
    const std::uint64_t next_gray = iter ^ (iter >> 1);
    const int col = std::countr_zero(gray ^ next_gray);
    const double dir = (next_gray & (1ull << col)) ? 1.0 : -1.0;
    for (int i = 0; i < k; ++i) {
      rowsum[i] += dir * a(i, col);
    }
    sign = -sign;
    cplx prod{1.0, 0.0};
    for (int i = 0; i < k; ++i) prod *= rowsum[i];
    total += sign * prod;
    local_ops += 2ull * static_cast<std::uint64_t>(k);
    gray = next_gray;
  }
  if (k % 2 != 0) total = -total;
  if (ops) *ops += local_ops;
  return total;
}

cplx permanent_repeated_rows(const ComplexMatrix& u, const FockState& s) {
  const int m = s.modes();
  if (static_cast<std::size_t>(m) > u.rows()) {
    throw std::invalid_argument("occupation list longer than the matrix");
  }
  const int n = s.photons();
  if (static_cast<std::size_t>(n) > u.cols()) {
    throw std::invalid_argument("photon count exceeds column count");
  }

  // Evaluate P(x) = prod_j (sum_i u(i,j) x_i) on a grid of roots of unity,
  // one factor ring of order s_i + 1 per mode; the permanent of the
  // row-repeated matrix is the weighted average of the evaluations.
  std::vector<std::vector<cplx>> roots(m);
  double denom = 1.0;
  double numer = 1.0;
  for (int i = 0; i < m; ++i) {
    const int order = s.occupations[i] + 1;
    denom *= static_cast<double>(order);
    for (int f = 2; f <= s.occupations[i]; ++f) numer *= static_cast<double>(f);
    roots[i].resize(order);
    for (int r = 0; r < order; ++r) {
      const double ang = 2.0 * std::numbers::pi * r / order;
      roots[i][r] = cplx{std::cos(ang), std::sin(ang)};
    }
  }

  std::vector<int> idx(m, 0);
  cplx total{};
  for (;;) {
    cplx weight{1.0, 0.0};
    for (int i = 0; i < m; ++i) {
      const cplx x = roots[i][idx[i]];
      for (int c = 0; c < s.occupations[i]; ++c) weight *= std::conj(x);
    }
    cplx prod{1.0, 0.0};
    for (int j = 0; j < n; ++j) {
      cplx col{};
      for (int i = 0; i < m; ++i) col += u(i, j) * roots[i][idx[i]];
      prod *= col;
    }
    total += weight * prod;
    int pos = 0;
    while (pos < m) {
      if (++idx[pos] < static_cast<int>(roots[pos].size())) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == m) break;
  }
  return total * (numer / denom);
}

ComplexMatrix repeated_submatrix(const ComplexMatrix& u, const ModeAssignment& rows,
                                 const ModeAssignment& cols) {
  if (rows.size() != cols.size()) {
    throw std::invalid_argument("row and column assignments must have equal length");
  }
  ComplexMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 1 || static_cast<std::size_t>(rows[i]) > u.rows()) {
      throw std::invalid_argument("row label " + std::to_string(rows[i]) + " out of range");
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j] < 1 || static_cast<std::size_t>(cols[j]) > u.cols()) {
        throw std::invalid_argument("column label " + std::to_string(cols[j]) + " out of range");
      }
      out(i, j) = u(rows[i] - 1, cols[j] - 1);
    }
  }
  return out;
}

cplx amplitude(const ComplexMatrix& u, const FockState& s, const FockState& t) {
  if (s.photons() != t.photons()) {
    throw std::invalid_argument("input and output photon numbers differ");
  }
  const ModeAssignment rows = to_assignment(s);
  const ModeAssignment cols = to_assignment(t);
  const cplx per = permanent(repeated_submatrix(u, rows, cols));
  return per / (normalization_factor(s) * normalization_factor(t));
}

std::map<FockState, cplx> full_distribution_naive(const ComplexMatrix& u, int n,
                                                  std::uint64_t* ops) {
  if (n < 0 || static_cast<std::size_t>(n) > u.cols()) {
    throw std::invalid_argument("photon count exceeds column count");
  }
  const int m = static_cast<int>(u.rows());
  ModeAssignment cols(n);
  for (int j = 0; j < n; ++j) cols[j] = j + 1;

  std::map<FockState, cplx> out;
  for_each_fock_state(m, n, [&](const FockState& s) {
    const cplx per = permanent(repeated_submatrix(u, to_assignment(s), cols), ops);
    out.emplace(s, per / normalization_factor(s));
    return true;
  });
  return out;
}

}  // namespace loslap
