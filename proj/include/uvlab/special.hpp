#pragma once

namespace uvlab::special {

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, for x > 0.
double expint_e1(double x);

/// Upper incomplete gamma Gamma(s, x) for x > 0 and s an integer or
/// half-integer not exceeding 1 (the values 1 - d/2 met by the propagator).
double upper_gamma_half_integer(double s, double x);

/// Probabilists' Hermite polynomial He_n(x).
double hermite_he(int n, double x);

/// He_n(0): zero for odd n, (-1)^k (2k-1)!! for n = 2k.
double hermite_he_at_zero(int n);

}  // namespace uvlab::special
