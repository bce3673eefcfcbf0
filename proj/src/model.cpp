#include "cusp/model.hpp"

#include <algorithm>
#include <cmath>

#include "cusp/errors.hpp"
#include "cusp/numerics.hpp"

namespace cusp {

namespace {

double secular(double r, double lnb) {
  return std::sin(r * lnb) - 2.0 * r * std::cos(r * lnb);
}

GridPtr refine_once(const CuspGrid& g) {
  auto out = std::make_shared<CuspGrid>();
  out->quad_order = g.quad_order;
  out->y.reserve(2 * g.y.size());
  for (std::size_t i = 0; i + 1 < g.y.size(); ++i) {
    out->y.push_back(g.y[i]);
    out->y.push_back(0.5 * (g.y[i] + g.y[i + 1]));
  }
  out->y.push_back(g.y.back());
  out->beta = g.beta;
  out->alpha_bar = g.alpha_bar;
  out->beta_index = out->node_at(g.beta > 0 ? g.beta : g.y.back());
  return out;
}

}  // namespace

double ZeroModeSpectrum::psi(int n, double y) const {
  const double r = roots.at(n);
  const double ly = std::log(y);
  return std::sqrt(y) * (std::cos(r * ly) - std::sin(r * ly) / (2.0 * r));
}

double ZeroModeSpectrum::psi_deriv(int n, double y) const {
  const double r = roots.at(n);
  const double ly = std::log(y);
  const double c = std::cos(r * ly), s = std::sin(r * ly);
  // d/dy [ sqrt(y) (cos(r ln y) - sin(r ln y)/(2r)) ]
  return 0.5 / std::sqrt(y) * (c - s / (2.0 * r)) +
         std::sqrt(y) * (-s * r / y - c / (2.0 * y));
}

ZeroModeSpectrum zero_mode_spectrum(double t, double beta, int n_max) {
  if (!(beta > 1.0 && t > 0.0))
    throw BracketFailure("zero_mode_spectrum requires beta > 1, t > 0");
  const double lnb = std::log(beta);
  if (!(lnb < 2.0))
    throw BracketFailure("zero_mode_spectrum: secular bracketing needs ln(beta) < 2");
  ZeroModeSpectrum out;
  out.beta = beta;
  out.t = t;
  for (int i = 0; i < n_max; ++i) {
    double lo = i * M_PI / lnb;
    double hi = (i + 0.5) * M_PI / lnb;
    if (i == 0) lo = 1e-8 * hi;  // r = 0 is a root of the reformulation
    hi *= 1.0 - 1e-15;
    const auto f = [&](double r) { return secular(r, lnb); };
    if (f(lo) * f(hi) > 0.0)
      throw BracketFailure("zero_mode_spectrum: no sign change in bracket " +
                           std::to_string(i));
    const double r = bisect(f, lo, hi, 1e-15 * hi, 300);
    out.roots.push_back(r);
    out.eigenvalues.push_back(t * t * (0.25 + r * r));
  }
  return out;
}

Ode1D assemble_ode1d(const GridPtr& grid) {
  Ode1D out;
  out.grid = grid;
  const CuspGrid& g = *grid;
  const std::size_t n = g.n_nodes() - 1;  // Dirichlet right
  std::vector<Eigen::Triplet<double>> tk, tm0, tmy;
  const QuadRule base = gauss_legendre(g.quad_order);
  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    const double y0 = g.y[c], y1 = g.y[c + 1];
    const double h = y1 - y0;
    const double kloc[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
    const double m0loc[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
    double myloc[2][2] = {{0, 0}, {0, 0}};
    const double mid = 0.5 * (y0 + y1), half = 0.5 * h;
    for (int q = 0; q < g.quad_order; ++q) {
      const double y = mid + half * base.x[q];
      const double w = half * base.w[q] / (y * y);
      const double s = (y - y0) / h;
      const double phi[2] = {1.0 - s, s};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) myloc[i][j] += w * phi[i] * phi[j];
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const std::size_t gi = c + i, gj = c + j;
        if (gi >= n || gj >= n) continue;
        tk.emplace_back(gi, gj, kloc[i][j]);
        tm0.emplace_back(gi, gj, m0loc[i][j]);
        tmy.emplace_back(gi, gj, myloc[i][j]);
      }
  }
  auto build = [&](std::vector<Eigen::Triplet<double>>& t3) {
    SpMat m(static_cast<long>(n), static_cast<long>(n));
    m.setFromTriplets(t3.begin(), t3.end());
    m.makeCompressed();
    return m;
  };
  out.K = build(tk);
  out.M0 = build(tm0);
  out.My = build(tmy);
  return out;
}

Eigen::VectorXd Ode1D::expand(const Eigen::VectorXd& interior) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<long>(grid->n_nodes()));
  full.head(interior.size()) = interior;
  return full;
}

namespace {

// Lowest eigenpairs of t^2 K + (ell pi)^2 M0 against My on one grid.
EigPairs model_solve(const Ode1D& ode, int ell, double t, int count) {
  const double mu = ell * M_PI;
  SpMat A = t * t * ode.K + mu * mu * ode.M0;
  A.makeCompressed();
  EigOptions opts;
  opts.dense_threshold = 900;
  return solve_pairs(A, ode.My, count, std::nullopt, opts);
}

}  // namespace

std::vector<ModelBranch> mode_branch(int ell, const std::vector<double>& t_list,
                                     int branch_count, const GridPtr& grid,
                                     bool richardson) {
  if (ell < 1) throw ModeOutOfRange("mode_branch requires ell >= 1");
  const Ode1D ode = assemble_ode1d(grid);
  Ode1D ode_fine;
  if (richardson) ode_fine = assemble_ode1d(refine_once(*grid));

  std::vector<ModelBranch> branches(branch_count);
  const Airy& airy = Airy::instance();
  const auto zeros = airy.minus_prime_zeros(branch_count);
  for (int i = 0; i < branch_count; ++i) {
    branches[i].ell = ell;
    branches[i].index = i + 1;
    branches[i].grid = grid;
    branches[i].airy_a =
        std::pow(2.0 * (M_PI * ell) * (M_PI * ell), 2.0 / 3.0) * (-zeros[i]);
  }

  Eigen::MatrixXd prev_vectors;
  for (std::size_t it = 0; it < t_list.size(); ++it) {
    const double t = t_list[it];
    EigPairs pairs = model_solve(ode, ell, t, branch_count + 2);
    // Index matching across t by overlap with the previous sample.
    std::vector<int> pick(branch_count);
    if (it == 0 || prev_vectors.cols() == 0) {
      for (int i = 0; i < branch_count; ++i) pick[i] = i;
    } else {
      std::vector<bool> used(pairs.values.size(), false);
      for (int i = 0; i < branch_count; ++i) {
        int best = -1;
        double best_ov = -1.0;
        for (long j = 0; j < pairs.values.size(); ++j) {
          if (used[j]) continue;
          const double ov = std::abs(
              prev_vectors.col(i).dot(ode.My * pairs.vectors.col(j)));
          if (ov > best_ov) {
            best_ov = ov;
            best = static_cast<int>(j);
          }
        }
        pick[i] = best;
        used[best] = true;
      }
    }
    Eigen::MatrixXd keep(pairs.vectors.rows(), branch_count);
    for (int i = 0; i < branch_count; ++i) {
      double lambda = pairs.values[pick[i]];
      if (richardson) {
        EigPairs fine = model_solve(ode_fine, ell, t, branch_count + 2);
        // Same ordering holds on the refined grid for the separated
        // operator (simple, ordered eigenvalues).
        const double lf = fine.values[pick[i] < fine.values.size()
                                          ? pick[i]
                                          : fine.values.size() - 1];
        lambda = (4.0 * lf - lambda) / 3.0;
      }
      branches[i].t.push_back(t);
      branches[i].lambda.push_back(lambda);
      branches[i].profiles.push_back(ode.expand(pairs.vectors.col(pick[i])));
      keep.col(i) = pairs.vectors.col(pick[i]);
    }
    prev_vectors = keep;
  }
  return branches;
}

AiryPrediction airy_predict(int ell, int branch_index) {
  const auto zeros = Airy::instance().minus_prime_zeros(branch_index);
  AiryPrediction out;
  out.zeta = zeros[branch_index - 1];
  const double mu2 = 2.0 * (M_PI * ell) * (M_PI * ell);
  out.a = std::pow(mu2, 2.0 / 3.0) * (-out.zeta);
  const double mu = (M_PI * ell) * (M_PI * ell);
  const double a = out.a;
  out.lambda_hat = [mu, a](double t) {
    return mu + a * std::pow(t, 2.0 / 3.0);
  };
  return out;
}

namespace {

std::vector<double> rescaled_solve(double s, double mu, int count,
                                   double x_max, int n_cells) {
  // P1 on [0, x_max], natural at 0, Dirichlet at x_max.
  const double h = x_max / n_cells;
  const long n = n_cells;  // unknowns: nodes 0 .. n_cells-1
  std::vector<Eigen::Triplet<double>> ta, tn;
  const QuadRule base = gauss_legendre(4);
  auto fz = [&](double z) { return 1.0 / ((z + 1.0) * (z + 1.0)); };
  auto gz = [&](double z) { return (z + 2.0) / ((z + 1.0) * (z + 1.0)); };
  for (long c = 0; c < n_cells; ++c) {
    const double x0 = c * h;
    const double kloc[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
    double gloc[2][2] = {{0, 0}, {0, 0}}, floc[2][2] = {{0, 0}, {0, 0}};
    for (int q = 0; q < 4; ++q) {
      const double x = x0 + 0.5 * h + 0.5 * h * base.x[q];
      const double w = 0.5 * h * base.w[q];
      const double sloc = (x - x0) / h;
      const double phi[2] = {1.0 - sloc, sloc};
      const double gv = s == 0.0 ? 2.0 : gz(s * s * x);
      const double fv = s == 0.0 ? 1.0 : fz(s * s * x);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          gloc[i][j] += w * mu * x * gv * phi[i] * phi[j];
          floc[i][j] += w * fv * phi[i] * phi[j];
        }
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const long gi = c + i, gj = c + j;
        if (gi >= n || gj >= n) continue;
        ta.emplace_back(gi, gj, kloc[i][j] + gloc[i][j]);
        tn.emplace_back(gi, gj, floc[i][j]);
      }
  }
  SpMat A(n, n), N(n, n);
  A.setFromTriplets(ta.begin(), ta.end());
  N.setFromTriplets(tn.begin(), tn.end());
  EigOptions opts;
  opts.dense_threshold = 600;
  EigPairs pairs = solve_pairs(A, N, count, std::nullopt, opts);
  std::vector<double> out(pairs.values.data(),
                          pairs.values.data() + pairs.values.size());
  return out;
}

}  // namespace

std::vector<double> rescaled_spectrum(double s, double mu, int count,
                                      double x_max, int n_cells,
                                      bool richardson) {
  std::vector<double> coarse = rescaled_solve(s, mu, count, x_max, n_cells);
  if (!richardson) return coarse;
  std::vector<double> fine = rescaled_solve(s, mu, count, x_max, 2 * n_cells);
  for (std::size_t i = 0; i < coarse.size(); ++i)
    coarse[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return coarse;
}

double WkbBasis::f(double y) const {
  return mu / (y * y) - (ell * M_PI) * (ell * M_PI);
}

double WkbBasis::amplitude(double y) const {
  return std::pow(f(y), -0.25);
}

double WkbBasis::phase(double y) const {
  // int_1^y sqrt(f); f is smooth and positive on [1, beta].
  const QuadRule r = gauss_legendre(24, 1.0, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    acc += r.w[i] * std::sqrt(f(r.x[i]));
  return acc;
}

double WkbBasis::value_cos(double y) const {
  return amplitude(y) * std::cos(phase(y) / t);
}

double WkbBasis::value_sin(double y) const {
  return amplitude(y) * std::sin(phase(y) / t);
}

double WkbBasis::verify_deviation(int n_steps) const {
  // Exact companion: t^2 v'' + f v = 0 with data matched at y = 1.
  const double f1 = f(1.0);
  const double famp1 = std::pow(f1, -0.25);
  const double df1 = (-2.0 * mu);  // f'(1) = -2 mu / y^3 at y = 1
  const double damp1 = -0.25 * std::pow(f1, -1.25) * df1;
  double state[2] = {famp1, damp1};
  double dev = 0.0, scale = 0.0;
  const double tt = t;
  const WkbBasis* self = this;
  rk4(
      [self, tt](double y, const double* v, double* dv) {
        dv[0] = v[1];
        dv[1] = -self->f(y) * v[0] / (tt * tt);
      },
      2, 1.0, beta, n_steps, state,
      [&](double y, const double* v) {
        const double w = self->value_cos(y);
        dev = std::max(dev, std::abs(v[0] - w));
        scale = std::max(scale, std::abs(w));
      });
  return dev / scale;
}

WkbBasis wkb_basis(int ell, double mu, double t, double beta) {
  WkbBasis out;
  out.ell = ell;
  out.mu = mu;
  out.t = t;
  out.beta = beta;
  // Turning point check on [1, beta].
  for (int i = 0; i <= 256; ++i) {
    const double y = 1.0 + (beta - 1.0) * i / 256.0;
    if (!(out.f(y) > 0.0))
      throw TurningPointInWindow("f_mu vanishes at y = " + std::to_string(y));
  }
  return out;
}

double AiryBasis::plus(double x) const {
  return Airy::instance().plus(std::pow(s, -2.0 / 3.0) * (x - z_s));
}

double AiryBasis::minus(double x) const {
  return Airy::instance().minus(std::pow(s, -2.0 / 3.0) * (x - z_s));
}

double AiryBasis::plus_prime(double x) const {
  const double sc = std::pow(s, -2.0 / 3.0);
  return sc * Airy::instance().plus_prime(sc * (x - z_s));
}

double AiryBasis::minus_prime(double x) const {
  const double sc = std::pow(s, -2.0 / 3.0);
  return sc * Airy::instance().minus_prime(sc * (x - z_s));
}

AiryBasis::Particular AiryBasis::particular(
    const std::function<double(double)>& R, double xbar, int n_cells) const {
  // W(x) = s^{-4/3}/2 [ W_+(x) int_x^xbar R W_-  +  W_-(x) int_0^x R W_+ ].
  const double pre = 0.5 * std::pow(s, -4.0 / 3.0);
  std::vector<double> xs(n_cells + 1), ip(n_cells + 1), im(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) xs[i] = xbar * i / n_cells;
  // Cumulative integrals: ip[i] = int_0^{x_i} R W_+, im[i] = int_{x_i}^{xbar} R W_-.
  ip[0] = 0.0;
  for (int i = 1; i <= n_cells; ++i) {
    const QuadRule r = gauss_legendre(6, xs[i - 1], xs[i]);
    double acc = 0.0;
    for (std::size_t q = 0; q < r.x.size(); ++q)
      acc += r.w[q] * R(r.x[q]) * plus(r.x[q]);
    ip[i] = ip[i - 1] + acc;
  }
  im[n_cells] = 0.0;
  for (int i = n_cells - 1; i >= 0; --i) {
    const QuadRule r = gauss_legendre(6, xs[i], xs[i + 1]);
    double acc = 0.0;
    for (std::size_t q = 0; q < r.x.size(); ++q)
      acc += r.w[q] * R(r.x[q]) * minus(r.x[q]);
    im[i] = im[i + 1] + acc;
  }
  std::vector<double> val(n_cells + 1), der(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) {
    val[i] = pre * (plus(xs[i]) * im[i] + minus(xs[i]) * ip[i]);
    der[i] = pre * (plus_prime(xs[i]) * im[i] + minus_prime(xs[i]) * ip[i]);
  }
  Particular out;
  out.table = HermiteTable(xs, val, der);
  return out;
}

AiryBasis airy_basis(double s, double z_s) {
  if (!(s > 0.0)) throw Error("airy_basis requires s > 0");
  AiryBasis out;
  out.s = s;
  out.z_s = z_s;
  return out;
}

double measure_localization(const Eigen::VectorXd& profile, const CuspGrid& g,
                            double t, double alpha) {
  const double cutoff = 1.0 + 2.0 * std::pow(t, alpha);
  const QuadRule base = gauss_legendre(g.quad_order);
  double total = 0.0, tail = 0.0;
  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    const double y0 = g.y[c], y1 = g.y[c + 1];
    auto piece = [&](double a, double b) {
      if (b <= a) return 0.0;
      double acc = 0.0;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t q = 0; q < base.x.size(); ++q) {
        const double y = mid + half * base.x[q];
        const double s = (y - y0) / (y1 - y0);
        const double v = profile[static_cast<long>(c)] * (1 - s) +
                         profile[static_cast<long>(c + 1)] * s;
        acc += half * base.w[q] * v * v / (y * y);
      }
      return acc;
    };
    total += piece(y0, y1);
    tail += piece(std::max(y0, cutoff), y1);
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace cusp
