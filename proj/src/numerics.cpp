#include "cusp/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace cusp {

QuadRule gauss_legendre(int n) {
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton on P_n with Chebyshev-like initial guesses; standard recurrence
  // for the Legendre polynomial and its derivative.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

QuadRule gauss_legendre(int n, double a, double b) {
  QuadRule base = gauss_legendre(n);
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = mid + half * base.x[i];
    r.w[i] = half * base.w[i];
  }
  return r;
}

QuadRule composite_gauss(int per_panel, int panels, double a, double b) {
  QuadRule base = gauss_legendre(per_panel);
  QuadRule r;
  r.x.reserve(static_cast<std::size_t>(per_panel) * panels);
  r.w.reserve(static_cast<std::size_t>(per_panel) * panels);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h, half = 0.5 * h;
    for (int i = 0; i < per_panel; ++i) {
      r.x.push_back(mid + half * base.x[i]);
      r.w.push_back(half * base.w[i]);
    }
  }
  return r;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw BracketFailure("bisect: no sign change on bracket");
  for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double newton_bracketed(const std::function<double(double)>& f,
                        const std::function<double(double)>& df, double lo,
                        double hi, double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw BracketFailure("newton_bracketed: no sign change on bracket");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if (flo * fx < 0.0)
      hi = x;
    else
      lo = x;
    double d = df(x);
    double xn = (d != 0.0) ? x - fx / d : x;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisection fallback
    if (std::abs(xn - x) < xtol) return xn;
    x = xn;
  }
  return x;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit out;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return out;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return out;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                   double floor) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(y[i]) > floor && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::abs(y[i])));
    }
  }
  return fit_line(lx, ly);
}

void rk4(const std::function<void(double, const double*, double*)>& f, int m,
         double x0, double x1, int n, double* y,
         const std::function<void(double, const double*)>& observe) {
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  const double h = (x1 - x0) / n;
  double x = x0;
  if (observe) observe(x, y);
  for (int step = 0; step < n; ++step) {
    f(x, y, k1.data());
    for (int j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    f(x + 0.5 * h, tmp.data(), k2.data());
    for (int j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    f(x + 0.5 * h, tmp.data(), k3.data());
    for (int j = 0; j < m; ++j) tmp[j] = y[j] + h * k3[j];
    f(x + h, tmp.data(), k4.data());
    for (int j = 0; j < m; ++j)
      y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    x = x0 + (step + 1) * h;
    if (observe) observe(x, y);
  }
}

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> f,
                           std::vector<double> df)
    : x_(std::move(x)), f_(std::move(f)), df_(std::move(df)) {}

std::size_t HermiteTable::cell(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (i == 0) return 0;
  if (i >= x_.size()) return x_.size() - 2;
  return i - 1;
}

double HermiteTable::value(double x) const {
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * f_[i] + h10 * h * df_[i] + h01 * f_[i + 1] + h11 * h * df_[i + 1];
}

double HermiteTable::deriv(double x) const {
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double d00 = 6 * s * (s - 1) / h;
  const double d10 = (1 - s) * (1 - 3 * s);
  const double d01 = -d00;
  const double d11 = s * (3 * s - 2);
  return d00 * f_[i] + d10 * df_[i] + d01 * f_[i + 1] + d11 * df_[i + 1];
}

}  // namespace cusp
