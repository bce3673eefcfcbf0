#include "cusp/airy.hpp"

#include <cmath>

#include "cusp/errors.hpp"

namespace cusp {

namespace {

// Asymptotic series coefficients u_k (values) and v_k (derivatives),
// u_0 = v_0 = 1, u_{k+1}/u_k = (6k+1)(6k+3)(6k+5) / (216 (k+1)(2k+1)),
// v_k = (6k+1)/(1-6k) * u_k.
void series_coeffs(int n, std::vector<double>& u, std::vector<double>& v) {
  u.assign(n, 0.0);
  v.assign(n, 0.0);
  u[0] = v[0] = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double num = (6.0 * k + 1.0) * (6.0 * k + 3.0) * (6.0 * k + 5.0);
    const double den = 216.0 * (k + 1.0) * (2.0 * k + 1.0);
    u[k + 1] = u[k] * num / den;
    v[k + 1] = (6.0 * (k + 1) + 1.0) / (1.0 - 6.0 * (k + 1)) * u[k + 1];
  }
}

void airy_rhs(double x, const double* y, double* dy) {
  dy[0] = y[1];
  dy[1] = x * y[0];
}

}  // namespace

void Airy::asymptotic_minus(double x, double* value, double* deriv) {
  const double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
  std::vector<double> u, v;
  series_coeffs(8, u, v);
  double su = 0.0, sv = 0.0, sgn = 1.0, zk = 1.0;
  for (int k = 0; k < 8; ++k) {
    su += sgn * u[k] / zk;
    sv += sgn * v[k] / zk;
    sgn = -sgn;
    zk *= zeta;
  }
  const double e = std::exp(-zeta);
  *value = std::pow(x, -0.25) * e * su;
  *deriv = -std::pow(x, 0.25) * e * sv;
}

void Airy::asymptotic_plus(double x, double* value, double* deriv) {
  const double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
  std::vector<double> u, v;
  series_coeffs(8, u, v);
  double su = 0.0, sv = 0.0, zk = 1.0;
  for (int k = 0; k < 8; ++k) {
    su += u[k] / zk;
    sv += v[k] / zk;
    zk *= zeta;
  }
  const double e = std::exp(zeta);
  *value = std::pow(x, -0.25) * e * su;
  *deriv = std::pow(x, 0.25) * e * sv;
}

Airy::Airy() {
  const double h = 2.5e-4;
  const int stride = 4;

  // A_-: inward from the asymptotic regime (the decaying solution grows
  // inward, so the integration is stable).
  {
    double y[2];
    asymptotic_minus(x_match_, &y[0], &y[1]);
    const int n = static_cast<int>(std::llround((x_match_ - x_lo_) / h));
    std::vector<double> xs, fs, ds;
    xs.reserve(n / stride + 2);
    fs.reserve(n / stride + 2);
    ds.reserve(n / stride + 2);
    int step = 0;
    rk4(airy_rhs, 2, x_match_, x_lo_, n, y,
        [&](double x, const double* yy) {
          if (step % stride == 0 || step == n) {
            xs.push_back(x);
            fs.push_back(yy[0]);
            ds.push_back(yy[1]);
          }
          ++step;
        });
    std::reverse(xs.begin(), xs.end());
    std::reverse(fs.begin(), fs.end());
    std::reverse(ds.begin(), ds.end());
    minus_ = HermiteTable(xs, fs, ds);
    std::vector<double> dds(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dds[i] = xs[i] * fs[i];
    minus_d_ = HermiteTable(xs, ds, dds);
  }

  // A_+: Wronskian-exact data at 0 derived from A_-(0), A_-'(0); outward
  // integration is stable in the growing direction.
  {
    const double am0 = minus_.value(0.0);
    const double dm0 = minus_d_.value(0.0);
    const double ap0 = 0.5 * std::sqrt(3.0) * am0;
    const double dp0 = -0.5 * std::sqrt(3.0) * dm0;

    std::vector<double> xs, fs, ds;
    // Left sweep 0 -> x_lo_, collected reversed.
    {
      double y[2] = {ap0, dp0};
      const int n = static_cast<int>(std::llround((0.0 - x_lo_) / h));
      std::vector<double> xs1, fs1, ds1;
      int step = 0;
      rk4(airy_rhs, 2, 0.0, x_lo_, n, y,
          [&](double x, const double* yy) {
            if (step % stride == 0 || step == n) {
              xs1.push_back(x);
              fs1.push_back(yy[0]);
              ds1.push_back(yy[1]);
            }
            ++step;
          });
      std::reverse(xs1.begin(), xs1.end());
      std::reverse(fs1.begin(), fs1.end());
      std::reverse(ds1.begin(), ds1.end());
      xs = xs1;
      fs = fs1;
      ds = ds1;
    }
    // Right sweep 0 -> x_hi_, skipping the duplicated origin.
    {
      double y[2] = {ap0, dp0};
      const int n = static_cast<int>(std::llround((x_hi_ - 0.0) / h));
      int step = 0;
      rk4(airy_rhs, 2, 0.0, x_hi_, n, y,
          [&](double x, const double* yy) {
            if ((step % stride == 0 || step == n) && step != 0) {
              xs.push_back(x);
              fs.push_back(yy[0]);
              ds.push_back(yy[1]);
            }
            ++step;
          });
    }
    plus_ = HermiteTable(xs, fs, ds);
    std::vector<double> dds(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dds[i] = xs[i] * fs[i];
    plus_d_ = HermiteTable(xs, ds, dds);
  }
}

const Airy& Airy::instance() {
  static const Airy airy;
  return airy;
}

double Airy::minus(double x) const {
  if (x > x_match_) {
    double v, d;
    asymptotic_minus(x, &v, &d);
    return v;
  }
  if (x < x_lo_) throw Error("Airy::minus: argument below table range");
  return minus_.value(x);
}

double Airy::minus_prime(double x) const {
  if (x > x_match_) {
    double v, d;
    asymptotic_minus(x, &v, &d);
    return d;
  }
  if (x < x_lo_) throw Error("Airy::minus_prime: argument below table range");
  return minus_d_.value(x);
}

double Airy::plus(double x) const {
  if (x > x_hi_) {
    double v, d;
    asymptotic_plus(x, &v, &d);
    return v;
  }
  if (x < x_lo_) throw Error("Airy::plus: argument below table range");
  return plus_.value(x);
}

double Airy::plus_prime(double x) const {
  if (x > x_hi_) {
    double v, d;
    asymptotic_plus(x, &v, &d);
    return d;
  }
  if (x < x_lo_) throw Error("Airy::plus_prime: argument below table range");
  return plus_d_.value(x);
}

std::vector<double> Airy::minus_prime_zeros(int n) const {
  std::vector<double> zeros;
  const double step = 1e-3;
  double x0 = -step;
  double f0 = minus_prime(x0);
  for (double x = -2 * step; x > x_lo_ && static_cast<int>(zeros.size()) < n;
       x -= step) {
    const double f = minus_prime(x);
    if (f0 * f <= 0.0 && (f0 != 0.0 || f != 0.0)) {
      double lo = x, hi = x0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = minus_prime(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (fm * minus_prime(lo) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    x0 = x;
    f0 = f;
  }
  if (static_cast<int>(zeros.size()) < n)
    throw BracketFailure("Airy: table range exhausted before finding zeros");
  return zeros;
}

}  // namespace cusp
