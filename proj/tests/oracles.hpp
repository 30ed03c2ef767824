// Slow, independent reference implementations used only by the test suites.
// Everything here is written for obviousness, not speed: permutation sums,
// explicit subset enumeration, and classical particle counting.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "loslap/fock.hpp"
#include "loslap/matrix.hpp"
#include "loslap/permanent.hpp"

namespace loslap::testing {

/// Permanent straight from the definition: sum over all k! permutations.
inline cplx naive_permanent(const ComplexMatrix& a) {
  const std::size_t k = a.rows();
  if (k == 0) return cplx{1.0, 0.0};
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  cplx sum{};
  do {
    cplx prod{1.0, 0.0};
    for (std::size_t i = 0; i < k; ++i) prod *= a(i, perm[i]);
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

/// The m x |cols| matrix keeping only the listed one-based columns of u.
inline ComplexMatrix column_subset(const ComplexMatrix& u, const std::vector<int>& cols) {
  ComplexMatrix out(u.rows(), cols.size());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(i, j) = u(i, static_cast<std::size_t>(cols[j] - 1));
    }
  }
  return out;
}

/**
 * Uniform-loss output distribution by brute force: every photon survives
 * independently with probability 1 - eta, so we enumerate all 2^n subsets of
 * surviving input columns and add each subset's lossless distribution with
 * weight eta^(lost) * (1-eta)^(kept).
 */
inline std::map<FockState, double> lossy_by_subset_enumeration(const ComplexMatrix& u, int n,
                                                               double eta) {
  const int m = static_cast<int>(u.rows());
  std::map<FockState, double> out;
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    std::vector<int> kept;
    for (int c = 0; c < n; ++c) {
      if (bits & (1ull << c)) kept.push_back(c + 1);
    }
    const int k = static_cast<int>(kept.size());
    const double weight =
        std::pow(eta, static_cast<double>(n - k)) * std::pow(1.0 - eta, static_cast<double>(k));
    if (k == 0) {
      out[FockState::vacuum(m)] += weight;
      continue;
    }
    const auto dist = full_distribution_naive(column_subset(u, kept), k);
    for (const auto& [state, amp] : dist) out[state] += weight * std::norm(amp);
  }
  return out;
}

/**
 * Fully distinguishable photons behave classically: photon j lands in output
 * mode i with probability |u(i, j)|^2 independently.  Enumerate all m^n
 * assignments and bin them by occupation vector.
 */
inline std::map<FockState, double> classical_distribution(const ComplexMatrix& u, int n) {
  const int m = static_cast<int>(u.rows());
  std::map<FockState, double> out;
  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  for (;;) {
    double p = 1.0;
    FockState s = FockState::vacuum(m);
    for (int j = 0; j < n; ++j) {
      p *= std::norm(u(static_cast<std::size_t>(assign[j]), static_cast<std::size_t>(j)));
      ++s.occupations[assign[j]];
    }
    out[s] += p;
    int pos = n - 1;
    while (pos >= 0 && assign[pos] == m - 1) assign[pos--] = 0;
    if (pos < 0) break;
    ++assign[pos];
  }
  return out;
}

/// Largest absolute difference between two keyed maps (missing key = 0).
template <typename K>
double max_abs_diff(const std::map<K, cplx>& a, const std::map<K, cplx>& b) {
  double worst = 0.0;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    const cplx other = it == b.end() ? cplx{} : it->second;
    worst = std::max(worst, std::abs(v - other));
  }
  for (const auto& [k, v] : b) {
    if (a.find(k) == a.end()) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

template <typename K>
double max_abs_diff(const std::map<K, double>& a, const std::map<K, double>& b) {
  double worst = 0.0;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    const double other = it == b.end() ? 0.0 : it->second;
    worst = std::max(worst, std::abs(v - other));
  }
  for (const auto& [k, v] : b) {
    if (a.find(k) == a.end()) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace loslap::testing
