#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <vector>

namespace cornerlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(int n, int k);
BigInt factorial(int n);
Rational pow(const Rational& base, int exponent);

/// sum_j (-1)^{p-j} C(p,j) ||x + j s||_p^p in exact arithmetic.
/// Requires x + j s >= 0 coordinatewise for j = 0..p.
Rational binomial_difference_exact(std::span<const Rational> x, std::span<const Rational> s, int p);

/// sum_j (-1)^{p-j} C(p,j) (alpha + j beta)^l in exact arithmetic; 0 <= l <= p.
Rational scalar_finite_difference_exact(const Rational& alpha, const Rational& beta, int p, int l);

/// p! * ||s||_p^p, exact.
Rational factorial_norm_pow_exact(std::span<const Rational> s, int p);

/// p! * sum_i s_i^p (signed powers), exact.
Rational factorial_power_sum_exact(std::span<const Rational> s, int p);

}  // namespace cornerlab
