#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qrelent/combinatorics.hpp"
#include "qrelent/errors.hpp"

using namespace qrelent;

namespace {

BigInt binomial(int n, int k) {
  BigInt r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Partitions of [n] with every block of size >= 2: choose the block of
// element n, then partition the rest.
BigInt partitions_min_two(int n) {
  std::vector<BigInt> a(static_cast<std::size_t>(n + 1), 0);
  a[0] = 1;
  for (int p = 1; p <= n; ++p) {
    for (int j = 1; j <= p - 1; ++j) a[p] += binomial(p - 1, j) * a[p - 1 - j];
  }
  return a[n];
}

}  // namespace

TEST_CASE("associated Stirling examples") {
  CHECK(stirling2_assoc(4, 2) == 3);
  CHECK(stirling2_assoc(6, 2) == 25);
  CHECK(stirling2_assoc(3, 2) == 0);
  CHECK(stirling2_assoc(0, 0) == 1);
  CHECK(stirling2_assoc(5, 0) == 0);
}

TEST_CASE("Stirling table agrees with brute force and the EGF") {
  const StirlingTable table(12);
  for (int n = 0; n <= 10; ++n)
    for (int k = 0; k <= 5; ++k) CHECK(table(n, k) == BigInt(oracle::assoc_stirling_brute(n, k)));
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= 6; ++k) CHECK(table(n, k) == oracle::assoc_stirling_egf(n, k));
  for (int n = 0; n <= 10; ++n) {
    BigInt row = 0;
    for (int k = 0; k <= n; ++k) row += table(n, k);
    CHECK(row == partitions_min_two(n));
  }
}

TEST_CASE("enumeration examples") {
  for (int n = 1; n <= 6; ++n) {
    CHECK(enumerate_I(1, n).count == 0);
    CHECK(enumerate_I(2, n).count == 2 * n * (n - 1));
  }
  CHECK(enumerate_I(2, 2).count == 4);
  CHECK(enumerate_I(2, 3).count == 12);
  CHECK_THROWS_AS(enumerate_I(5, 7), ArgumentError);
  CHECK_THROWS_AS(enumerate_I(0, 3), ArgumentError);
}

TEST_CASE("enumeration agrees with brute force") {
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 5; ++n) {
      CHECK(enumerate_I(m, n).count == BigInt(oracle::count_I_brute(m, n)));
    }
  }
  CHECK(enumerate_I(4, 3).count == BigInt(oracle::count_I_brute(4, 3)));

  const EnumerationResult listed = enumerate_I(3, 3, true);
  CHECK(BigInt(listed.patterns.size()) == listed.count);
  for (const auto& p : listed.patterns) {
    CHECK_FALSE(oracle::has_singleton(p.i, p.j));
    for (int k = 0; k < 3; ++k) CHECK(p.i[k] != p.j[k]);
  }
}

TEST_CASE("enumeration count is monotone in N") {
  for (int m = 1; m <= 3; ++m) {
    BigInt prev = 0;
    for (int n = 1; n <= 6; ++n) {
      const BigInt c = enumerate_I(m, n).count;
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("bound chain examples") {
  const CombinatoricsBound b = bound_check(2, 3);
  CHECK(b.exact == 12);
  CHECK(b.stirling_sum == 21);
  CHECK(b.c0_bound == 1152);
  CHECK(b.case_small_m);
  CHECK(b.chain_holds);

  const CombinatoricsBound one = bound_check(1, 4);
  CHECK(one.exact == 0);
  CHECK(one.chain_holds);

  const CombinatoricsBound big = bound_check(3, 2);
  CHECK_FALSE(big.case_small_m);
  CHECK(big.power_bound == 64);
  CHECK(big.exact <= 64);
  CHECK(big.e_bound == doctest::Approx(std::pow(2 * std::exp(1.0), 3) * 6));
  CHECK(big.chain_holds);

  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 6; ++n) CHECK(bound_check(m, n).chain_holds);
  CHECK(bound_check(4, 4).chain_holds);
}

TEST_CASE("exact helpers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  CHECK(falling_factorial(5, 2) == 20);
  CHECK(falling_factorial(3, 4) == 0);
  CHECK(big_pow(BigInt(24), 2) == 576);
}

TEST_CASE("geometric partition series") {
  for (double c : {0.01, 1.0, 37.5}) {
    CHECK(series_log2_check(c) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(partition_series(c, 1.0 / (8 * 8 * c)) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(std::isinf(partition_series(c, 1.0 / (2 * 8 * c))));
    CHECK(partition_series(c, 0.999999 / (2 * 8 * c)) > 1e5);
  }
  CHECK_THROWS_AS(series_log2_check(0.0), ArgumentError);
}
