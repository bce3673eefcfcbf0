#pragma once

// Small numerical utilities shared across the library: Gauss-Legendre rules,
// bracketed root finding, least-squares line fits, and an RK4 integrator.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "cusp/errors.hpp"

namespace cusp {

struct QuadRule {
  std::vector<double> x;  // nodes
  std::vector<double> w;  // weights
};

// n-point Gauss-Legendre rule on [-1, 1], nodes by Newton on P_n.
QuadRule gauss_legendre(int n);

// Rule mapped to [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Composite rule: `panels` equal panels on [a, b], `per_panel` Gauss points each.
QuadRule composite_gauss(int per_panel, int panels, double a, double b);

// Bisection for a root of f in [lo, hi]; requires a sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter = 200);

// Newton iteration with a bisection safeguard; the bracket must contain a
// root and f must have one sign change on it.
double newton_bracketed(const std::function<double(double)>& f,
                        const std::function<double(double)>& df, double lo,
                        double hi, double xtol, int max_iter = 100);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;  // coefficient of determination
};

// Least squares fit y ~ intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log|y| vs log x, skipping entries with |y| <= floor.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                   double floor = 0.0);

// Fixed-step RK4 for y' = f(x, y) with y in R^m, integrating from x0 to x1
// in n steps. Calls observe(x, y) after every step (and at x0) when given.
void rk4(const std::function<void(double, const double*, double*)>& f, int m,
         double x0, double x1, int n, double* y,
         const std::function<void(double, const double*)>& observe = nullptr);

// Cubic-Hermite interpolation table for a function with known values and
// first derivatives on an increasing grid.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> f,
               std::vector<double> df);

  double value(double x) const;
  double deriv(double x) const;
  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }

 private:
  std::size_t cell(double x) const;
  std::vector<double> x_, f_, df_;
};

}  // namespace cusp
