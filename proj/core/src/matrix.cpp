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

#include "loslap/matrix.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace loslap {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) u(i, i) = 1.0;
  return u;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

ComplexMatrix truncate_columns(const ComplexMatrix& u, int n) {
  if (n < 0 || static_cast<std::size_t>(n) > u.cols()) {
    throw std::invalid_argument("cannot keep " + std::to_string(n) + " of " +
                                std::to_string(u.cols()) + " columns");
  }
  ComplexMatrix out(u.rows(), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) out(i, j) = u(i, j);
  }
  return out;
}

bool is_exact_identity(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return false;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = 0; j < u.cols(); ++j) {
      if (u(i, j) != (i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0})) return false;
    }
  }
  return true;
}

double unitarity_deviation(const ComplexMatrix& u) {
  double worst = 0.0;
  for (std::size_t a = 0; a < u.cols(); ++a) {
    for (std::size_t b = a; b < u.cols(); ++b) {
      cplx dot{};
      for (std::size_t i = 0; i < u.rows(); ++i) dot += std::conj(u(i, a)) * u(i, b);
      if (a == b) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

namespace {

// Fixed Gaussian source: 53-bit uniforms from a 64-bit Mersenne twister fed
// through Box-Muller.  std::normal_distribution is implementation-defined,
// which would break cross-platform reproducibility of seeded matrices.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

ComplexMatrix haar_random_unitary(int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("need at least one mode");
  const auto mm = static_cast<std::size_t>(m);
  ComplexMatrix g(mm, mm);
  GaussianSource gauss(seed);
  for (std::size_t i = 0; i < mm; ++i) {
    for (std::size_t j = 0; j < mm; ++j) {
      const double re = gauss();
      const double im = gauss();
      g(i, j) = cplx{re, im};
    }
  }
  // Modified Gram-Schmidt with a second orthogonalization pass.  The
  // triangular factor's diagonal comes out real positive, which is the phase
  // fixing that makes Q Haar-distributed.
  ComplexMatrix q(mm, mm);
  for (std::size_t j = 0; j < mm; ++j) {
    std::vector<cplx> col(mm);
    for (std::size_t i = 0; i < mm; ++i) col[i] = g(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj{};
        for (std::size_t i = 0; i < mm; ++i) proj += std::conj(q(i, k)) * col[i];
        for (std::size_t i = 0; i < mm; ++i) col[i] -= proj * q(i, k);
      }
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < mm; ++i) norm2 += std::norm(col[i]);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < mm; ++i) q(i, j) = col[i] * inv;
  }
  return q;
}

}  // namespace loslap
