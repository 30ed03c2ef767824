#include <stdexcept>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "loslap/budget.hpp"
#include "loslap/costmodel.hpp"
#include "loslap/matrix.hpp"
#include "loslap/permanent.hpp"
#include "loslap/slos.hpp"
#include "oracles.hpp"

using namespace loslap;

namespace {

std::map<FockState, cplx> as_map(const SlosResult& r) {
  std::map<FockState, cplx> out;
  std::size_t idx = 0;
  for_each_fock_state(r.m, r.n, [&](const FockState& s) {
    out[s] = r.amplitudes[idx++];
    return true;
  });
  return out;
}

}  // namespace

TEST_CASE("full expansion matches the permanent oracle") {
  for (int m = 2; m <= 6; ++m) {
    for (int n = 1; n <= 5 && n <= m; ++n) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ComplexMatrix u = haar_random_unitary(m, seed);
        const auto got = as_map(slos_full(u, n));
        const auto want = full_distribution_naive(u, n);
        CHECK(testing::max_abs_diff(got, want) <= 1e-10);
      }
    }
  }
}

TEST_CASE("identity circuit keeps one photon per mode") {
  const auto dist = as_map(slos_full(ComplexMatrix::identity(3), 3));
  for (const auto& [s, a] : dist) {
    const double want = (s == FockState{{1, 1, 1}}) ? 1.0 : 0.0;
    CHECK(std::abs(a - cplx{want, 0}) <= 1e-14);
  }
}

TEST_CASE("expansion work is 2n * binomial(n+m-1, n)") {
  for (int m = 1; m <= 8; ++m) {
    for (int n = 1; n <= 6 && n <= m; ++n) {
      const SlosResult r = slos_full(haar_random_unitary(m, 3), n);
      CHECK(Count(r.complex_ops) == flops_slos(n, m));
      CHECK(Count(r.peak_coefficient_slots) == mem_slos_slots(n, m));
    }
  }
  const SlosResult vacuum = slos_full(haar_random_unitary(3, 3), 0);
  CHECK(vacuum.complex_ops == 0);
  CHECK(vacuum.amplitudes.size() == 1);
  CHECK(vacuum.amplitudes[0] == cplx{1.0, 0.0});
}

TEST_CASE("memory refusal happens before expansion") {
  const ComplexMatrix u = haar_random_unitary(6, 1);
  CHECK_THROWS_AS(slos_full(u, 5, 64), budget_error);
  CHECK_THROWS_AS(slos_masked(u, 5, Mask{{1}, {2}}, 64), budget_error);
}

TEST_CASE("mask enumeration covers every occupation pattern once") {
  const auto one_mode = enumerate_masks({1}, 2, false);
  CHECK(one_mode.size() == 3);  // totals 0, 1, 2

  const auto full_two = enumerate_masks({1, 2}, 2, true);
  CHECK(full_two.size() == 3);  // (2,0), (1,1), (0,2)
  for (const Mask& mask : full_two) CHECK(mask.photons() == 2);

  const auto slack_two = enumerate_masks({1, 2}, 2, false);
  CHECK(slack_two.size() == 6);  // binomial(n+k, n)

  CHECK_THROWS_AS(enumerate_masks({}, 2, false), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_masks({2, 1}, 2, false), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_masks({0, 1}, 2, false), std::invalid_argument);
}

TEST_CASE("masked runs partition the full expansion") {
  const int m = 4, n = 3;
  const ComplexMatrix u = haar_random_unitary(m, 21);
  const auto full = as_map(slos_full(u, n));

  std::map<FockState, cplx> merged;
  for (const Mask& mask : enumerate_masks({1, 2}, n, false)) {
    const MaskedSlosResult r = slos_masked(u, n, mask);
    for (const auto& [s, a] : r.amplitudes) {
      CHECK(merged.find(s) == merged.end());  // masks are disjoint
      merged[s] = a;
      // pruning must not perturb values: same arithmetic path as slos_full
      CHECK(a == full.at(s));
    }
  }
  CHECK(merged.size() == full.size());
}

TEST_CASE("masked amplitudes agree with the single-state permanent") {
  const int m = 4, n = 3;
  const ComplexMatrix u = haar_random_unitary(m, 8);
  const MaskedSlosResult r = slos_masked(u, n, Mask{{1}, {n}});
  CHECK(r.amplitudes.size() == 1);
  const FockState top{{3, 0, 0, 0}};
  const cplx direct = amplitude(u, top, FockState{{1, 1, 1, 0}});
  CHECK(std::abs(r.amplitudes.at(top) - direct) <= 1e-10);
}

TEST_CASE("an empty mask reduces to the full expansion") {
  const int m = 4, n = 3;
  const ComplexMatrix u = haar_random_unitary(m, 13);
  const MaskedSlosResult r = slos_masked(u, n, Mask{{}, {}});
  const auto full = as_map(slos_full(u, n));
  CHECK(r.amplitudes.size() == full.size());
  for (const auto& [s, a] : r.amplitudes) CHECK(a == full.at(s));
}

TEST_CASE("mask validation names the offending mode") {
  const ComplexMatrix u = haar_random_unitary(3, 2);
  CHECK_THROWS_AS(slos_masked(u, 2, Mask{{4}, {1}}, kDefaultMemoryCapBytes),
                  std::invalid_argument);
  CHECK_THROWS_AS(slos_masked(u, 2, Mask{{1, 1}, {0, 1}}, kDefaultMemoryCapBytes),
                  std::invalid_argument);
  CHECK_THROWS_AS(slos_masked(u, 2, Mask{{1}, {1, 2}}, kDefaultMemoryCapBytes),
                  std::invalid_argument);
  // over-full masks are legal inputs with an empty result
  CHECK(slos_masked(u, 2, Mask{{1}, {3}}).amplitudes.empty());
}

TEST_CASE("mask-sweep work matches the closed-form count") {
  // Sum the instrumented operation count over every mask on modes 1..k and
  // compare with the closed-form cost of the whole sweep.
  for (int m = 2; m <= 8; ++m) {
    const ComplexMatrix u = haar_random_unitary(m, 99);
    for (int n = 1; n <= 6 && n <= m; ++n) {
      for (int k = 1; k <= m; ++k) {
        std::vector<int> modes(k);
        for (int i = 0; i < k; ++i) modes[i] = i + 1;
        std::uint64_t total = 0;
        for (const Mask& mask : enumerate_masks(modes, n, k == m)) {
          total += slos_masked(u, n, mask).complex_ops;
        }
        CHECK(Count(total) == flops_slos_mask(n, m, k));
      }
    }
  }
}
