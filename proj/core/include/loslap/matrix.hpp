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
#include <cstddef>
#include <cstdint>
#include <vector>

namespace loslap {

using cplx = std::complex<double>;

/**
 * @brief Dense row-major complex matrix.
 *
 * Used both for full m-by-m unitaries and for the m-by-n interferometer
 * blocks acting on the n occupied input modes (the first n columns of a
 * unitary).  Deliberately minimal: the heavy numerics in this project are in
 * the coefficient-vector kernels, not in linear algebra.
 */
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const cplx* row(std::size_t r) const { return data_.data() + r * cols_; }
  const std::vector<cplx>& data() const { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// The leading n columns of u (the block acting on the occupied input modes).
ComplexMatrix truncate_columns(const ComplexMatrix& u, int n);

/// True when every entry is exactly 0 or 1 in the identity pattern.
bool is_exact_identity(const ComplexMatrix& u);

/**
 * @brief max |u^dagger u - I| over all column pairs.
 *
 * For an m-by-n block of a unitary this measures column orthonormality; for
 * a square matrix it measures unitarity.
 */
double unitarity_deviation(const ComplexMatrix& u);

/**
 * @brief Haar-distributed m-by-m random unitary, deterministic per seed.
 *
 * Drawn by QR-factorizing a complex Gaussian matrix; the factorization fixes
 * the phases of the triangular factor's diagonal (the diagonal is real
 * positive), which makes the distribution Haar.  The Gaussian stream is
 * generated from a fixed 64-bit engine and a fixed Box-Muller transform so
 * that the same (m, seed) pair yields identical matrices on every platform.
 * Unitarity holds to well below 1e-12.
 */
ComplexMatrix haar_random_unitary(int m, std::uint64_t seed);

}  // namespace loslap
