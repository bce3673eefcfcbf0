#pragma once

// Self-contained basis {A_plus, A_minus} of solutions to w'' = x w,
// normalized by the envelopes x^{-1/4} exp(+-(2/3) x^{3/2}) at +infinity.
// A_minus is obtained by integrating inward from the asymptotic regime;
// A_plus by outward integration from Wronskian-exact data at 0. Their
// Wronskian A_plus' A_minus - A_plus A_minus' equals 2.

#include <vector>

#include "cusp/numerics.hpp"

namespace cusp {

class Airy {
 public:
  static const Airy& instance();

  double minus(double x) const;        // A_-
  double minus_prime(double x) const;
  double plus(double x) const;         // A_+
  double plus_prime(double x) const;

  // First n zeros of A_-', descending (all negative).
  std::vector<double> minus_prime_zeros(int n) const;

  double table_min() const { return x_lo_; }
  double table_max() const { return x_hi_; }

 private:
  Airy();
  static void asymptotic_minus(double x, double* value, double* deriv);
  static void asymptotic_plus(double x, double* value, double* deriv);

  double x_lo_ = -16.0;
  double x_hi_ = 14.0;
  double x_match_ = 12.0;  // asymptotic seed point for A_-
  HermiteTable minus_, minus_d_, plus_, plus_d_;
};

}  // namespace cusp
