#include <gtest/gtest.h>

#include "cornerlab/exact.hpp"
#include "cornerlab/rng.hpp"

using namespace cornerlab;

TEST(Exact, BinomialAndFactorial) {
  EXPECT_EQ(binomial(10, 3), BigInt(120));
  EXPECT_EQ(factorial(20), BigInt("2432902008176640000"));
  EXPECT_EQ(pow(Rational(2, 3), 3), Rational(8, 27));
}

TEST(Exact, BinomialDifferenceNonnegativeSides) {
  CounterRng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = static_cast<int>(rng.next_int(1, 4));
    const auto d = static_cast<std::size_t>(rng.next_int(1, 4));
    std::vector<Rational> x(d), s(d);
    for (auto& v : x) v = Rational(rng.next_int(0, 50), rng.next_int(1, 7));
    for (auto& v : s) v = Rational(rng.next_int(0, 50), rng.next_int(1, 7));
    EXPECT_EQ(binomial_difference_exact(x, s, p), factorial_norm_pow_exact(s, p));
  }
}

TEST(Exact, MixedSignsGiveSignedPowerSum) {
  // Even p: |s_i|^p = s_i^p. Odd p: the signed sum appears.
  const std::vector<Rational> x{Rational(10), Rational(10)};
  const std::vector<Rational> s{Rational(2), Rational(-1)};
  EXPECT_EQ(binomial_difference_exact(x, s, 2), factorial_norm_pow_exact(s, 2));
  EXPECT_EQ(binomial_difference_exact(x, s, 3), factorial_power_sum_exact(s, 3));
  EXPECT_NE(binomial_difference_exact(x, s, 3), factorial_norm_pow_exact(s, 3));
  EXPECT_EQ(factorial_power_sum_exact(s, 3), Rational(6 * 7));
}

TEST(Exact, NegativeCoordinatesRejected) {
  const std::vector<Rational> x{Rational(0)};
  const std::vector<Rational> s{Rational(-1)};
  EXPECT_THROW(binomial_difference_exact(x, s, 2), std::invalid_argument);
}

TEST(Exact, ScalarDifference) {
  CounterRng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = static_cast<int>(rng.next_int(1, 4));
    const Rational a(rng.next_int(-30, 30), rng.next_int(1, 5));
    const Rational b(rng.next_int(-30, 30), rng.next_int(1, 5));
    for (int l = 0; l < p; ++l) EXPECT_EQ(scalar_finite_difference_exact(a, b, p, l), Rational(0));
    Rational top = Rational(factorial(p)) * pow(b, p);
    EXPECT_EQ(scalar_finite_difference_exact(a, b, p, p), top);
  }
  EXPECT_THROW(scalar_finite_difference_exact(Rational(1), Rational(1), 2, 3), std::invalid_argument);
}
