#include <stdexcept>
#include <bit>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "loslap/bits.hpp"
#include "loslap/fock.hpp"

using namespace loslap;

TEST_CASE("enumeration counts match the stars-and-bars formula") {
  for (int m = 1; m <= 8; ++m) {
    for (int n = 0; n <= 6; ++n) {
      const auto states = enumerate_fock_states(m, n);
      CHECK(states.size() == fock_state_count(m, n));
      std::set<std::vector<int>> seen;
      for (const FockState& s : states) {
        CHECK(s.modes() == m);
        CHECK(s.photons() == n);
        seen.insert(s.occupations);
      }
      CHECK(seen.size() == states.size());  // all distinct
    }
  }
  CHECK(enumerate_fock_states(3, 3).size() == 10);
  CHECK(enumerate_fock_states(1, 5).size() == 1);
  CHECK(enumerate_fock_states(1, 5).front().occupations == std::vector<int>{5});
  CHECK(enumerate_fock_states(20, 2).size() == 210);
}

TEST_CASE("enumeration is lexicographically ascending") {
  for (int m = 2; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) {
      const auto states = enumerate_fock_states(m, n);
      for (std::size_t i = 1; i < states.size(); ++i) {
        CHECK(states[i - 1].occupations < states[i].occupations);
      }
    }
  }
}

TEST_CASE("rank inverts the enumeration order") {
  for (int m = 1; m <= 6; ++m) {
    for (int n = 0; n <= 5; ++n) {
      std::uint64_t expected = 0;
      for_each_fock_state(m, n, [&](const FockState& s) {
        CHECK(fock_rank(s) == expected);
        ++expected;
        return true;
      });
    }
  }
}

TEST_CASE("state/assignment conversions are mutually inverse") {
  const FockState a{{0, 2, 1, 0, 1}};
  CHECK(to_assignment(a) == ModeAssignment{2, 2, 3, 5});
  CHECK(to_assignment(FockState::vacuum(4)).empty());
  const FockState b{{3, 0, 1}};
  CHECK(to_assignment(b) == ModeAssignment{1, 1, 1, 3});

  for (int m = 1; m <= 6; ++m) {
    for (int n = 0; n <= 4; ++n) {
      for_each_fock_state(m, n, [&](const FockState& s) {
        CHECK(from_assignment(to_assignment(s), m) == s);
        return true;
      });
    }
  }
  CHECK_THROWS_AS(from_assignment({0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(from_assignment({4}, 3), std::invalid_argument);
}

TEST_CASE("normalization factor is the square root of the factorial product") {
  CHECK(normalization_factor(FockState{{1, 1, 1}}) == doctest::Approx(1.0));
  CHECK(normalization_factor(FockState{{3, 0, 1}}) == doctest::Approx(std::sqrt(6.0)));
  CHECK(normalization_factor(FockState{{2, 2}}) == doctest::Approx(2.0));
  // Past 20! the value switches to log-space evaluation; 25! is still exact
  // in double precision up to rounding, so compare with a loose relative bar.
  const double f25 = 15511210043330985984000000.0;  // 25!
  CHECK(factorial_product(FockState{{25}}) == doctest::Approx(f25).epsilon(1e-12));
  CHECK(normalization_factor(FockState{{25}}) == doctest::Approx(std::sqrt(f25)).epsilon(1e-12));
}

TEST_CASE("combination masks step through same-popcount integers") {
  CHECK(next_combination(0b0011) == 0b0101);
  CHECK(next_combination(0b0101) == 0b0110);
  CHECK(next_combination(0b0110) == 0b1001);

  for (int n = 1; n <= 10; ++n) {
    for (int w = 1; w <= n; ++w) {
      std::uint64_t count = 0;
      SubsetMask prev = 0;
      for (SubsetMask j = first_combination(w); !combination_exhausted(j, n);
           j = next_combination(j)) {
        CHECK(std::popcount(j) == w);
        CHECK(j > prev);
        prev = j;
        ++count;
      }
      CHECK(count == binomial_u64(n, w));
    }
  }
}

TEST_CASE("state text form round-trips") {
  for (int m = 1; m <= 5; ++m) {
    for_each_fock_state(m, 3, [&](const FockState& s) {
      CHECK(parse_state(format_state(s)) == s);
      return true;
    });
  }
  CHECK(format_state(FockState{{0, 2, 1}}) == "0,2,1");
  CHECK_THROWS_AS(parse_state(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("1,-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("1,x"), std::invalid_argument);
}

TEST_CASE("oversized enumerations are rejected instead of wrapping") {
  CHECK_THROWS_AS(fock_state_count(40, 40), std::overflow_error);
  CHECK_THROWS_AS(enumerate_fock_states(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_fock_states(3, -1), std::invalid_argument);
}
