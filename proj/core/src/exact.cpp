#include "cornerlab/exact.hpp"

#include <stdexcept>

namespace cornerlab {

BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  Rational r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

namespace {
void check_order(int p) {
  if (p < 1) throw std::invalid_argument("exponent p must be a positive integer");
}
}  // namespace

Rational binomial_difference_exact(std::span<const Rational> x, std::span<const Rational> s, int p) {
  check_order(p);
  if (x.size() != s.size() || x.empty()) throw std::invalid_argument("x and s must have the same positive length");
  Rational total = 0;
  for (int j = 0; j <= p; ++j) {
    Rational norm_pow = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Rational c = x[i] + j * s[i];
      if (c < 0) throw std::invalid_argument("x + j*s has a negative coordinate");
      norm_pow += pow(c, p);
    }
    const Rational term = Rational(binomial(p, j)) * norm_pow;
    if ((p - j) % 2 == 0) total += term; else total -= term;
  }
  return total;
}

Rational scalar_finite_difference_exact(const Rational& alpha, const Rational& beta, int p, int l) {
  check_order(p);
  if (l < 0 || l > p) throw std::invalid_argument("l must satisfy 0 <= l <= p");
  Rational total = 0;
  for (int j = 0; j <= p; ++j) {
    const Rational term = Rational(binomial(p, j)) * pow(alpha + j * beta, l);
    if ((p - j) % 2 == 0) total += term; else total -= term;
  }
  return total;
}

Rational factorial_norm_pow_exact(std::span<const Rational> s, int p) {
  check_order(p);
  Rational acc = 0;
  for (const auto& v : s) acc += pow(v < 0 ? Rational(-v) : v, p);
  return Rational(factorial(p)) * acc;
}

Rational factorial_power_sum_exact(std::span<const Rational> s, int p) {
  check_order(p);
  Rational acc = 0;
  for (const auto& v : s) acc += pow(v, p);
  return Rational(factorial(p)) * acc;
}

}  // namespace cornerlab
