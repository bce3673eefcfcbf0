#pragma once

// Triangle moduli parametrization, the cubic normalization family B_alpha,
// the strip diffeomorphism phi_{c,w} with its Jacobian-derived weights
// (rho, Q), and the renormalized degenerating-family coefficients
// (rho_t, Q_t) together with the polynomial p.

#include <array>
#include <optional>

#include "cusp/errors.hpp"

namespace cusp {

// A point of the moduli space M = {(c,w): 0 <= c < 1, 2c < w < c+1}.
// Canonical representative: c <= w - c, i.e. theta1 >= theta2.
struct TriangleParams {
  double c = 0.0;
  double w = 0.5;
  bool boundary = false;

  TriangleParams() = default;
  TriangleParams(double c_, double w_);  // validates, flags boundary

  double theta1() const;  // angle with cos(theta1) = c
  double theta2() const;  // angle with cos(theta2) = w - c
};

// Both vertex angles in (0, pi/2); the representative is canonicalized so
// that (c, w) lands in the closed moduli space.
TriangleParams triangle_from_angles(double theta1, double theta2);

// Degree-3 polynomial in y (stored low-to-high) and its closed-form
// coefficient derivatives with respect to alpha.
struct Poly3 {
  std::array<double, 4> c{};
  double operator()(double y) const {
    return c[0] + y * (c[1] + y * (c[2] + y * c[3]));
  }
  double deriv(double y) const { return c[1] + y * (2 * c[2] + y * 3 * c[3]); }
  double deriv2(double y) const { return 2 * c[2] + 6 * c[3] * y; }
};

// The cubic B_alpha with B(alpha)=1, B'(0)=alpha, B(abar)=abar, B'(abar)=1.
struct CubicB {
  double alpha = 1.0;
  double alpha_bar = 2.0;
  Poly3 b;        // B_alpha(y)
  Poly3 dalpha;   // d/dalpha of the coefficients, evaluated at this alpha

  double value(double y) const { return b(y); }
  double deriv(double y) const { return b.deriv(y); }
  double deriv2(double y) const { return b.deriv2(y); }
  double alpha_deriv(double y) const { return dalpha(y); }       // dB/dalpha
  double alpha_y_deriv(double y) const { return dalpha.deriv(y); }
};

CubicB build_cubic(double alpha, double alpha_bar);

// Solves B_alpha(y) = b for y in [alpha, alpha_bar], b in [1, alpha_bar].
double invert_cubic(const CubicB& B, double b);

// p(b) = -dB/dalpha at alpha = 1 (analytic coefficient differentiation).
Poly3 p_poly(double alpha_bar);

// Same by central finite differences in alpha; cross-check only.
Poly3 p_poly_fd(double alpha_bar, double h = 1e-6);

// Pointwise data of the renormalized degenerating-family coefficients on
// S_- = [0,1] x [1, alpha_bar].
struct DegenPoint {
  double rho = 1.0;       // rho_t(a,b)
  double rho_a = 0.0;     // d rho / da
  double rho_b = 0.0;     // d rho / db
  double q11 = 1.0, q12 = 0.0, q22 = 1.0;  // entries of Q_t(a,b)
  double y = 1.0;         // preimage ordinate
};

// Pointwise data of the generic-(c,w) coefficients on S.
struct PhiPoint {
  double rho = 1.0;
  double rho_a = 0.0;
  double rho_b = 0.0;
  double q11 = 1.0, q12 = 0.0, q22 = 1.0;
  double y = 1.0;
};

// Evaluators tied to one triangle (generic moduli point) or to one t of the
// degenerating family. Value-semantic and safe to share across threads.
class DiffeoFields {
 public:
  // Generic triangle: phi_{c,w} machinery, weights rho_{c,w}, Q_{c,w}.
  static DiffeoFields generic(const TriangleParams& params, double alpha_bar);

  // Degenerating family at parameter t (c = 0, w = t), renormalized fields.
  static DiffeoFields degenerating(double t, double beta, double alpha_bar);

  double alpha_bar() const { return alpha_bar_; }
  double width() const { return w_; }
  double t() const;  // throws unless degenerating

  // phi(x, y) = (x/w, F_c(x,y)); identity in y above alpha_bar.
  std::array<double, 2> map(double x, double y) const;
  std::array<double, 2> unmap(double a, double b) const;
  std::array<double, 4> jacobian(double x, double y) const;  // row-major

  // Generic-weight evaluation at (a, b) in S.
  PhiPoint phi_point(double a, double b) const;

  // Renormalized-field evaluation at (a, b) in S_-.
  DegenPoint degen_point(double a, double b) const;

  bool is_degenerating() const { return t_.has_value(); }

 private:
  DiffeoFields() = default;
  CubicB cubic_at(double alpha) const;
  void validate_monotone() const;

  double c_ = 0.0;
  double w_ = 1.0;
  double alpha_bar_ = 2.0;
  std::optional<double> t_;
};

// Largest t (up to `hi`) for which the degenerating-family grid check
// d/dy B(f(x), y) >= 1/2 passes.
double degenerate_t_limit(double alpha_bar, double hi = 0.9);

}  // namespace cusp
