#include "cusp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cusp/numerics.hpp"

namespace cusp {

namespace {

constexpr double kBoundaryTol = 1e-12;

// Closed forms from the construction of B_alpha:
//   B'(y) = A * y*(abar - y) + y/abar + (alpha/abar)*(abar - y)
// with A = N/D, N = (1-alpha)*(alpha^2 - 2*abar*alpha + abar^2 - 2*abar),
// D = 2*abar*Qbar, Qbar = abar^3/6 - abar*alpha^2/2 + alpha^3/3.
struct CubicCoeffs {
  double A, dA;  // A(alpha) and dA/dalpha
};

CubicCoeffs cubic_A(double alpha, double abar) {
  const double quad = alpha * alpha - 2.0 * abar * alpha + abar * abar - 2.0 * abar;
  const double N = (1.0 - alpha) * quad;
  const double Qbar = abar * abar * abar / 6.0 - abar * alpha * alpha / 2.0 +
                      alpha * alpha * alpha / 3.0;
  const double D = 2.0 * abar * Qbar;
  if (D == 0.0 || !std::isfinite(1.0 / D))
    throw DegenerateAlpha("cubic family: Q_alpha(alpha_bar) = 0");
  const double dN = -quad + (1.0 - alpha) * (2.0 * alpha - 2.0 * abar);
  const double dD = 2.0 * abar * (alpha * alpha - abar * alpha);
  CubicCoeffs out;
  out.A = N / D;
  out.dA = (dN * D - N * dD) / (D * D);
  return out;
}

}  // namespace

TriangleParams::TriangleParams(double c_in, double w_in) : c(c_in), w(w_in) {
  if (!(c >= 0.0 && c < 1.0))
    throw OutOfModuli("c = " + std::to_string(c) + " outside [0, 1)");
  if (w < 2.0 * c - kBoundaryTol || w > c + 1.0 + kBoundaryTol)
    throw OutOfModuli("(c, w) = (" + std::to_string(c) + ", " +
                      std::to_string(w) + ") violates 2c <= w <= c+1");
  boundary = std::abs(w - 2.0 * c) <= kBoundaryTol ||
             std::abs(w - (c + 1.0)) <= kBoundaryTol;
}

double TriangleParams::theta1() const { return std::acos(c); }
double TriangleParams::theta2() const { return std::acos(w - c); }

TriangleParams triangle_from_angles(double theta1, double theta2) {
  if (!(theta1 > 0.0 && theta1 < M_PI / 2.0 && theta2 > 0.0 &&
        theta2 < M_PI / 2.0))
    throw OutOfModuli("angles must lie in (0, pi/2)");
  const double c1 = std::cos(theta1), c2 = std::cos(theta2);
  // Reflecting x -> w - x exchanges the two vertices, so the representative
  // with c <= w - c is taken.
  return TriangleParams(std::min(c1, c2), c1 + c2);
}

CubicB build_cubic(double alpha, double alpha_bar) {
  if (!(alpha > 0.0 && alpha < alpha_bar))
    throw DegenerateAlpha("build_cubic requires 0 < alpha < alpha_bar");
  const CubicCoeffs ac = cubic_A(alpha, alpha_bar);
  CubicB B;
  B.alpha = alpha;
  B.alpha_bar = alpha_bar;
  // B'(y) = -A y^2 + (A abar + (1 - alpha)/abar) y + alpha
  B.b.c[1] = alpha;
  B.b.c[2] = 0.5 * (ac.A * alpha_bar + (1.0 - alpha) / alpha_bar);
  B.b.c[3] = -ac.A / 3.0;
  B.b.c[0] = 1.0 - B.b.c[1] * alpha - B.b.c[2] * alpha * alpha -
             B.b.c[3] * alpha * alpha * alpha;
  // Coefficient derivatives in alpha (c1 = alpha so dc1 = 1).
  B.dalpha.c[1] = 1.0;
  B.dalpha.c[2] = 0.5 * (ac.dA * alpha_bar - 1.0 / alpha_bar);
  B.dalpha.c[3] = -ac.dA / 3.0;
  B.dalpha.c[0] = -2.0 * alpha - 2.0 * alpha * B.b.c[2] -
                  alpha * alpha * B.dalpha.c[2] -
                  3.0 * alpha * alpha * B.b.c[3] -
                  alpha * alpha * alpha * B.dalpha.c[3];
  return B;
}

double invert_cubic(const CubicB& B, double b) {
  double lo = std::min(B.alpha, 1.0), hi = B.alpha_bar;
  // B(alpha) = 1 and B(abar) = abar bracket every b in [1, abar].
  const double flo = B.value(lo) - b, fhi = B.value(hi) - b;
  if (flo > 1e-9 || fhi < -1e-9)
    throw NotMonotone("invert_cubic: b outside [B(alpha), B(alpha_bar)]");
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double f = B.value(y) - b;
    if (f == 0.0) break;
    if ((f > 0) == (fhi > 0))
      hi = y;
    else
      lo = y;
    const double d = B.deriv(y);
    if (d <= 0.0)
      throw NotMonotone("invert_cubic: B' <= 0 inside the bracket");
    double yn = y - f / d;
    if (!(yn > lo && yn < hi)) yn = 0.5 * (lo + hi);
    if (std::abs(yn - y) < 1e-15 * std::max(1.0, std::abs(y))) {
      y = yn;
      break;
    }
    y = yn;
  }
  return y;
}

Poly3 p_poly(double alpha_bar) {
  if (!(alpha_bar > 1.0))
    throw DegenerateAlpha("p_poly requires alpha_bar > 1");
  const CubicB B = build_cubic(1.0, alpha_bar);
  Poly3 p;
  for (int i = 0; i < 4; ++i) p.c[i] = -B.dalpha.c[i];
  return p;
}

Poly3 p_poly_fd(double alpha_bar, double h) {
  const CubicB Bp = build_cubic(1.0 + h, alpha_bar);
  const CubicB Bm = build_cubic(1.0 - h, alpha_bar);
  Poly3 p;
  for (int i = 0; i < 4; ++i) p.c[i] = -(Bp.b.c[i] - Bm.b.c[i]) / (2.0 * h);
  return p;
}

DiffeoFields DiffeoFields::generic(const TriangleParams& params,
                                   double alpha_bar) {
  DiffeoFields f;
  f.c_ = params.c;
  f.w_ = params.w;
  f.alpha_bar_ = alpha_bar;
  f.validate_monotone();
  return f;
}

DiffeoFields DiffeoFields::degenerating(double t, double beta,
                                        double alpha_bar) {
  if (!(t > 0.0 && t < 1.0))
    throw MonotonicityFailure("degenerating family needs 0 < t < 1");
  if (!(beta > alpha_bar && alpha_bar > 1.0))
    throw MonotonicityFailure("degenerating family needs 1 < alpha_bar < beta");
  DiffeoFields f;
  f.c_ = 0.0;
  f.w_ = t;
  f.alpha_bar_ = alpha_bar;
  f.t_ = t;
  f.validate_monotone();
  return f;
}

double DiffeoFields::t() const {
  if (!t_) throw Error("fields were not built for the degenerating family");
  return *t_;
}

CubicB DiffeoFields::cubic_at(double alpha) const {
  return build_cubic(alpha, alpha_bar_);
}

void DiffeoFields::validate_monotone() const {
  // 64x64 grid over the lower region; hard error on failure.
  const int n = 64;
  const double floor = t_ ? 0.5 : 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = w_ * (i + 0.5) / n;
    const double dx = x - c_;
    const double alpha = std::sqrt(std::max(0.0, 1.0 - dx * dx));
    if (alpha <= 0.0)
      throw MonotonicityFailure("f_c(x) vanished at x = " + std::to_string(x));
    const CubicB B = cubic_at(alpha);
    for (int j = 0; j < n; ++j) {
      const double y = alpha_bar_ * (j + 0.5) / n;
      if (!(B.deriv(y) > floor))
        throw MonotonicityFailure(
            "dB/dy fails at (x, y) = (" + std::to_string(x) + ", " +
            std::to_string(y) + ")");
    }
  }
}

std::array<double, 2> DiffeoFields::map(double x, double y) const {
  if (y >= alpha_bar_) return {x / w_, y};
  const double dx = x - c_;
  const double alpha = std::sqrt(1.0 - dx * dx);
  return {x / w_, cubic_at(alpha).value(y)};
}

std::array<double, 2> DiffeoFields::unmap(double a, double b) const {
  const double x = w_ * a;
  if (b >= alpha_bar_) return {x, b};
  const double dx = x - c_;
  const double alpha = std::sqrt(1.0 - dx * dx);
  return {x, invert_cubic(cubic_at(alpha), b)};
}

std::array<double, 4> DiffeoFields::jacobian(double x, double y) const {
  if (y >= alpha_bar_) return {1.0 / w_, 0.0, 0.0, 1.0};
  const double dx = x - c_;
  const double alpha = std::sqrt(1.0 - dx * dx);
  const CubicB B = cubic_at(alpha);
  const double fp = -dx / alpha;  // d f_c / dx
  return {1.0 / w_, 0.0, B.alpha_deriv(y) * fp, B.deriv(y)};
}

PhiPoint DiffeoFields::phi_point(double a, double b) const {
  PhiPoint out;
  if (b >= alpha_bar_) {
    out.rho = 1.0 / std::sqrt(w_);
    out.q11 = 1.0 / w_;
    out.q22 = w_;
    out.y = b;
    return out;
  }
  const double x = w_ * a;
  const double dx = x - c_;
  const double alpha = std::sqrt(1.0 - dx * dx);
  const CubicB B = cubic_at(alpha);
  const double y = invert_cubic(B, b);
  const double bp = B.deriv(y);
  const double byy = B.deriv2(y);
  const double ba = B.alpha_deriv(y);
  const double bay = B.alpha_y_deriv(y);
  const double fp = -dx / alpha;
  const double fx = ba * fp;                 // dF/dx
  const double alpha_a = w_ * fp;            // d alpha / da
  const double y_b = 1.0 / bp;
  const double y_a = -(ba / bp) * alpha_a;
  const double bp_b = byy * y_b;
  const double bp_a = (bay - byy * ba / bp) * alpha_a;
  const double sq = std::sqrt(bp / w_);
  out.y = y;
  out.rho = (y / b) * sq;
  out.rho_b = sq * (y_b / b - y / (b * b)) + (y / b) * bp_b / (2.0 * w_ * sq);
  out.rho_a = sq * y_a / b + (y / b) * bp_a / (2.0 * w_ * sq);
  out.q11 = 1.0 / (w_ * bp);
  out.q12 = fx / bp;
  out.q22 = w_ * (fx * fx + bp * bp) / bp;
  return out;
}

DegenPoint DiffeoFields::degen_point(double a, double b) const {
  const double t = this->t();
  DegenPoint out;
  if (b >= alpha_bar_) {
    out.y = b;
    return out;
  }
  const double x = t * a;
  const double alpha = std::sqrt(1.0 - x * x);
  const CubicB B = cubic_at(alpha);
  const double y = invert_cubic(B, b);
  const double bp = B.deriv(y);
  const double byy = B.deriv2(y);
  const double ba = B.alpha_deriv(y);
  const double bay = B.alpha_y_deriv(y);
  const double fp = -x / alpha;              // f'(ta)
  const double g = ba * fp;
  const double alpha_a = t * fp;             // d/da f(ta)
  const double y_b = 1.0 / bp;
  const double y_a = -(ba / bp) * alpha_a;
  const double bp_b = byy * y_b;
  const double bp_a = (bay - byy * ba / bp) * alpha_a;
  const double sq = std::sqrt(bp);
  out.y = y;
  out.rho = (y / b) * sq;
  out.rho_b = sq * (y_b / b - y / (b * b)) + (y / b) * bp_b / (2.0 * sq);
  out.rho_a = sq * y_a / b + (y / b) * bp_a / (2.0 * sq);
  out.q11 = 1.0 / bp;
  out.q12 = g / bp;
  out.q22 = (g * g + bp * bp) / bp;
  return out;
}

double degenerate_t_limit(double alpha_bar, double hi) {
  const int n = 64;
  auto ok = [&](double t) {
    for (int i = 0; i <= n; ++i) {
      const double x = t * i / n;
      const double alpha = std::sqrt(std::max(0.0, 1.0 - x * x));
      if (alpha <= 0.0) return false;
      CubicB B;
      try {
        B = build_cubic(alpha, alpha_bar);
      } catch (const DegenerateAlpha&) {
        return false;
      }
      for (int j = 0; j <= n; ++j) {
        const double y = alpha_bar * j / n;
        if (!(B.deriv(y) >= 0.5)) return false;
      }
    }
    return true;
  };
  if (ok(hi)) return hi;
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace cusp
