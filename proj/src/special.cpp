#include "uvlab/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "uvlab/errors.hpp"

namespace uvlab::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double e1_series(double x) {
  // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= -x / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) < kEps * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(x) - sum;
}

double e1_continued_fraction(double x) {
  // Modified Lentz on e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x);
}

}  // namespace

double expint_e1(double x) {
  if (!(x > 0.0)) throw PreconditionError("expint_e1: argument must be positive");
  return x <= 1.0 ? e1_series(x) : e1_continued_fraction(x);
}

double upper_gamma_half_integer(double s, double x) {
  if (!(x > 0.0)) throw PreconditionError("upper_gamma_half_integer: x must be positive");
  const double twice = 2.0 * s;
  if (twice != std::round(twice) || s > 1.0) {
    throw PreconditionError("upper_gamma_half_integer: s must be an integer or half-integer <= 1");
  }
  const bool half = std::abs(std::fmod(twice, 2.0)) == 1.0;
  // Start at Gamma(1/2, x) or Gamma(1, x) / Gamma(0, x) and recurse downward:
  // Gamma(a - 1, x) = (Gamma(a, x) - x^{a-1} e^{-x}) / (a - 1).
  double a;
  double value;
  if (half) {
    a = 0.5;
    value = std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x));
  } else if (s == 1.0) {
    return std::exp(-x);
  } else {
    a = 0.0;
    value = expint_e1(x);
  }
  const double ex = std::exp(-x);
  while (a > s) {
    value = (value - std::pow(x, a - 1.0) * ex) / (a - 1.0);
    a -= 1.0;
  }
  return value;
}

double hermite_he(int n, double x) {
  if (n < 0) throw PreconditionError("hermite_he: negative order");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_he_at_zero(int n) {
  if (n < 0) throw PreconditionError("hermite_he_at_zero: negative order");
  if (n % 2 == 1) return 0.0;
  double value = 1.0;
  // He_{k+1}(0) = -k He_{k-1}(0)
  for (int k = 1; k < n; k += 2) value *= -static_cast<double>(k);
  return value;
}

}  // namespace uvlab::special
