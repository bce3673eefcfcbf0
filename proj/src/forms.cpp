#include "cusp/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cusp/numerics.hpp"

namespace cusp {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// x e_k'(x) against e_l(x) on [0,1], closed form.
double x_coupling(int k, int l) {
  if (k == 0) return 0.0;
  if (l == 0) return std::sqrt(2.0) * ((k % 2 == 0) ? 1.0 : -1.0);
  if (k == l) return 0.5;
  const double sign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
  return sign * 2.0 * static_cast<double>(k) * k /
         (static_cast<double>(k) * k - static_cast<double>(l) * l);
}

struct CellGauss {
  std::vector<double> y, w, s;  // nodes, weights, local coordinates
};

CellGauss cell_rule(const CuspGrid& g, std::size_t c, const QuadRule& base) {
  CellGauss out;
  const double y0 = g.y[c], y1 = g.y[c + 1];
  const double mid = 0.5 * (y0 + y1), half = 0.5 * (y1 - y0);
  const std::size_t n = base.x.size();
  out.y.resize(n);
  out.w.resize(n);
  out.s.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    out.y[q] = mid + half * base.x[q];
    out.w[q] = half * base.w[q];
    out.s[q] = (out.y[q] - y0) / (y1 - y0);
  }
  return out;
}

// Exact P1 cell matrices.
void k_local(double h, double out[2][2]) {
  out[0][0] = out[1][1] = 1.0 / h;
  out[0][1] = out[1][0] = -1.0 / h;
}

void m0_local(double h, double out[2][2]) {
  out[0][0] = out[1][1] = h / 3.0;
  out[0][1] = out[1][0] = h / 6.0;
}

void scatter_mode_local(Triplets& trip, const DofMap& dofs, std::size_t c,
                        int k, const double loc[2][2]) {
  const int a0 = dofs(c, k), a1 = dofs(c + 1, k);
  const int id[2] = {a0, a1};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (id[i] >= 0 && id[j] >= 0)
        trip.emplace_back(id[i], id[j], loc[i][j]);
}

// Identity-coefficient local matrix of one mode: sy^2 K + (sx k pi)^2 M0.
void identity_mode_local(double h, int k, double sy, double sx,
                         double out[2][2]) {
  double kl[2][2], ml[2][2];
  k_local(h, kl);
  m0_local(h, ml);
  const double kk = sx * k * M_PI;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out[i][j] = sy * sy * kl[i][j] + kk * kk * ml[i][j];
}

SpMat from_triplets(int n, Triplets& trip) {
  SpMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

SpMat symmetrized(const SpMat& a) {
  SpMat at = SpMat(a.transpose());
  SpMat s = 0.5 * (a + at);
  s.makeCompressed();
  return s;
}

SpMat assemble_mass_matrix(const CuspGrid& g, const DofMap& dofs) {
  const QuadRule base = gauss_legendre(g.quad_order);
  Triplets trip;
  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    const CellGauss cg = cell_rule(g, c, base);
    double loc[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t q = 0; q < cg.y.size(); ++q) {
      const double wq = cg.w[q] / (cg.y[q] * cg.y[q]);
      const double phi[2] = {1.0 - cg.s[q], cg.s[q]};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) loc[i][j] += wq * phi[i] * phi[j];
    }
    for (int k = 0; k <= dofs.k_max; ++k)
      scatter_mode_local(trip, dofs, c, k, loc);
  }
  return from_triplets(dofs.n_dofs, trip);
}

// Shared kernel for the coupled region of q-type forms. dscale multiplies
// the b-derivative (t for the renormalized family, 1 for a moduli point).
template <typename PointFn>
void assemble_coupled_cells(const CuspGrid& g, const DofMap& dofs,
                            double alpha_bar, double dscale,
                            const PointFn& point, const QuadRule& xr,
                            double sy, double sx, Triplets& trip) {
  const int K = dofs.k_max;
  const int nm = K + 1;
  const std::size_t nx = xr.x.size();
  const QuadRule base = gauss_legendre(g.quad_order);

  // Mode basis values at the x nodes.
  Eigen::MatrixXd E(nx, nm), dE(nx, nm);
  for (std::size_t i = 0; i < nx; ++i)
    for (int k = 0; k < nm; ++k) {
      E(i, k) = mode_basis(k, xr.x[i]);
      dE(i, k) = mode_basis_deriv(k, xr.x[i]);
    }

  Eigen::MatrixXd Ax(nx, nm), B1(nx, nm), B2(nx, nm);
  Eigen::VectorXd q11(nx), q12(nx), q22(nx), wx(nx);
  for (std::size_t i = 0; i < nx; ++i) wx[i] = xr.w[i];

  Eigen::MatrixXd cpp(nm, nm), cpd(nm, nm), cdd(nm, nm);
  Eigen::MatrixXd loc(2 * nm, 2 * nm);

  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    if (g.y[c] >= alpha_bar - 1e-12) {
      // Identity coefficients: same local matrices as the reference form.
      const double h = g.y[c + 1] - g.y[c];
      for (int k = 0; k < nm; ++k) {
        double ml[2][2];
        identity_mode_local(h, k, sy, sx, ml);
        scatter_mode_local(trip, dofs, c, k, ml);
      }
      continue;
    }
    const CellGauss cg = cell_rule(g, c, base);
    const double h = g.y[c + 1] - g.y[c];
    loc.setZero();
    for (std::size_t q = 0; q < cg.y.size(); ++q) {
      const double b = cg.y[q];
      for (std::size_t i = 0; i < nx; ++i) {
        const auto pt = point(xr.x[i], b);
        q11[i] = pt.q11;
        q12[i] = pt.q12;
        q22[i] = pt.q22;
        for (int k = 0; k < nm; ++k) {
          Ax(i, k) = pt.rho_a * E(i, k) + pt.rho * dE(i, k);
          B1(i, k) = pt.rho * E(i, k);
          B2(i, k) = pt.rho_b * E(i, k);
        }
      }
      const Eigen::ArrayXd w11 = wx.array() * q11.array();
      const Eigen::ArrayXd w12 = wx.array() * q12.array();
      const Eigen::ArrayXd w22 = wx.array() * q22.array();
      const Eigen::MatrixXd sAA = Ax.transpose() * w11.matrix().asDiagonal() * Ax;
      const Eigen::MatrixXd sAB1 = Ax.transpose() * w12.matrix().asDiagonal() * B1;
      const Eigen::MatrixXd sAB2 = Ax.transpose() * w12.matrix().asDiagonal() * B2;
      const Eigen::MatrixXd sB1B1 = B1.transpose() * w22.matrix().asDiagonal() * B1;
      const Eigen::MatrixXd sB1B2 = B1.transpose() * w22.matrix().asDiagonal() * B2;
      const Eigen::MatrixXd sB2B2 = B2.transpose() * w22.matrix().asDiagonal() * B2;

      const double d = dscale;
      cpp = sAA + d * (sAB2 + sAB2.transpose()) + d * d * sB2B2;
      cpd = d * sAB1 + d * d * sB1B2.transpose();
      cdd = d * d * sB1B1;

      const double wq = cg.w[q];
      const double phi[2] = {1.0 - cg.s[q], cg.s[q]};
      const double dphi[2] = {-1.0 / h, 1.0 / h};
      for (int ci = 0; ci < 2; ++ci)
        for (int cj = 0; cj < 2; ++cj) {
          const double pp = wq * phi[ci] * phi[cj];
          const double pd = wq * phi[ci] * dphi[cj];
          const double dp = wq * dphi[ci] * phi[cj];
          const double dd = wq * dphi[ci] * dphi[cj];
          for (int k = 0; k < nm; ++k)
            for (int l = 0; l < nm; ++l)
              loc(ci * nm + k, cj * nm + l) += pp * cpp(k, l) +
                                               pd * cpd(k, l) +
                                               dp * cpd(l, k) +
                                               dd * cdd(k, l);
        }
    }
    for (int ci = 0; ci < 2; ++ci)
      for (int cj = 0; cj < 2; ++cj)
        for (int k = 0; k < nm; ++k)
          for (int l = 0; l < nm; ++l) {
            const int gi = dofs(c + ci, k), gj = dofs(c + cj, l);
            if (gi >= 0 && gj >= 0)
              trip.emplace_back(gi, gj, loc(ci * nm + k, cj * nm + l));
          }
  }
}

}  // namespace

QuadRule x_rule(int k_max) {
  // Composite Gauss resolving products of modes up to k_max against smooth
  // coefficients: one panel per mode plus margin, 12 points each.
  return composite_gauss(12, k_max + 2, 0.0, 1.0);
}

DofMap make_dof_map(const CuspGrid& grid, int k_max) {
  DofMap d;
  d.k_max = k_max;
  d.n_nodes = grid.n_nodes();
  d.idx.assign(d.n_nodes * (k_max + 1), -1);
  int next = 0;
  for (std::size_t i = 0; i < d.n_nodes; ++i) {
    for (int k = 0; k <= k_max; ++k) {
      const bool top = (i + 1 == d.n_nodes);
      const bool zero_cut = (k == 0 && i >= grid.beta_index);
      if (top || zero_cut) continue;
      d.idx[i * (k_max + 1) + k] = next++;
    }
  }
  d.n_dofs = next;
  return d;
}

Eigen::VectorXd FormPair::restrict_nodal(const ModeFunction& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.n_dofs);
  for (std::size_t i = 0; i < dofs.n_nodes; ++i)
    for (int k = 0; k <= k_max; ++k) {
      const int d = dofs(i, k);
      if (d >= 0) out[d] = u.profile(k)[static_cast<long>(i)];
    }
  return out;
}

ModeFunction FormPair::expand(const Eigen::VectorXd& v) const {
  ModeFunction u(grid, k_max);
  for (std::size_t i = 0; i < dofs.n_nodes; ++i)
    for (int k = 0; k <= k_max; ++k) {
      const int d = dofs(i, k);
      if (d >= 0) u.profile(k)[static_cast<long>(i)] = v[d];
    }
  return u;
}

double FormPair::bilinear(const ModeFunction& u, const ModeFunction& v) const {
  return restrict_nodal(u).dot(A * restrict_nodal(v));
}

double FormPair::mass_bilinear(const ModeFunction& u,
                               const ModeFunction& v) const {
  return restrict_nodal(u).dot(M * restrict_nodal(v));
}

void FormPair::dump_coords(std::ostream& os) const {
  char buf[64];
  for (int c = 0; c < A.outerSize(); ++c)
    for (SpMat::InnerIterator it(A, c); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n",
                    static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value());
      os << buf;
    }
}

FormPair assemble_a(double t, const GridPtr& grid, int k_max) {
  FormPair f;
  f.t = t;
  f.kind = FormKind::AModel;
  f.grid = grid;
  f.k_max = k_max;
  f.dofs = make_dof_map(*grid, k_max);
  Triplets trip;
  for (std::size_t c = 0; c < grid->n_cells(); ++c) {
    const double h = grid->y[c + 1] - grid->y[c];
    for (int k = 0; k <= k_max; ++k) {
      double loc[2][2];
      identity_mode_local(h, k, t, 1.0, loc);
      scatter_mode_local(trip, f.dofs, c, k, loc);
    }
  }
  f.A = from_triplets(f.dofs.n_dofs, trip);
  f.M = assemble_mass_matrix(*grid, f.dofs);
  return f;
}

FormPair assemble_atilde(double t, const GridPtr& grid, int k_max) {
  FormPair f = assemble_a(t, grid, k_max);
  f.kind = FormKind::ATilde;
  f.A = f.A + f.M;
  f.A.makeCompressed();
  return f;
}

FormPair assemble_adot(double t, const GridPtr& grid, int k_max) {
  FormPair f;
  f.t = t;
  f.kind = FormKind::ADot;
  f.grid = grid;
  f.k_max = k_max;
  f.dofs = make_dof_map(*grid, k_max);
  Triplets trip;
  for (std::size_t c = 0; c < grid->n_cells(); ++c) {
    const double h = grid->y[c + 1] - grid->y[c];
    double kl[2][2];
    k_local(h, kl);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) kl[i][j] *= 2.0 * t;
    for (int k = 0; k <= k_max; ++k)
      scatter_mode_local(trip, f.dofs, c, k, kl);
  }
  f.A = from_triplets(f.dofs.n_dofs, trip);
  f.M = assemble_mass_matrix(*grid, f.dofs);
  return f;
}

FormPair assemble_b(double t, const GridPtr& grid, int k_max, const Poly3& p,
                    double alpha_bar) {
  FormPair f;
  f.t = t;
  f.kind = FormKind::BCoupling;
  f.grid = grid;
  f.k_max = k_max;
  f.dofs = make_dof_map(*grid, k_max);
  const QuadRule base = gauss_legendre(grid->quad_order);
  Triplets trip;
  for (std::size_t c = 0; c < grid->n_cells(); ++c) {
    if (grid->y[c] >= alpha_bar - 1e-12) break;  // b lives on S_- only
    const CellGauss cg = cell_rule(*grid, c, base);
    const double h = grid->y[c + 1] - grid->y[c];
    // pd[i][j] = int p(y) phi_i phi_j' dy on the cell
    double pd[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t q = 0; q < cg.y.size(); ++q) {
      const double wp = cg.w[q] * p(cg.y[q]);
      const double phi[2] = {1.0 - cg.s[q], cg.s[q]};
      const double dphi[2] = {-1.0 / h, 1.0 / h};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) pd[i][j] += wp * phi[i] * dphi[j];
    }
    for (int k = 0; k <= k_max; ++k)
      for (int l = 0; l <= k_max; ++l) {
        const double ckl = x_coupling(k, l), clk = x_coupling(l, k);
        if (ckl == 0.0 && clk == 0.0) continue;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const int gi = f.dofs(c + i, k), gj = f.dofs(c + j, l);
            if (gi < 0 || gj < 0) continue;
            trip.emplace_back(gi, gj,
                              t * (ckl * pd[i][j] + clk * pd[j][i]));
          }
      }
  }
  f.A = from_triplets(f.dofs.n_dofs, trip);
  f.M = assemble_mass_matrix(*grid, f.dofs);
  return f;
}

FormPair assemble_q(const DiffeoFields& fields, const GridPtr& grid,
                    int k_max) {
  FormPair f;
  f.t = fields.t();
  f.kind = FormKind::Q;
  f.grid = grid;
  f.k_max = k_max;
  f.dofs = make_dof_map(*grid, k_max);
  Triplets trip;
  const QuadRule xr = x_rule(k_max);
  assemble_coupled_cells(
      *grid, f.dofs, fields.alpha_bar(), fields.t(),
      [&](double a, double b) { return fields.degen_point(a, b); }, xr,
      fields.t(), 1.0, trip);
  f.A = from_triplets(f.dofs.n_dofs, trip);
  f.M = assemble_mass_matrix(*grid, f.dofs);
  return f;
}

FormPair assemble_q_moduli(const DiffeoFields& fields, const GridPtr& grid,
                           int k_max) {
  FormPair f;
  f.t = 0.0;
  f.kind = FormKind::Q;
  f.grid = grid;
  f.k_max = k_max;
  f.dofs = make_dof_map(*grid, k_max);
  Triplets trip;
  const QuadRule xr = x_rule(k_max);
  assemble_coupled_cells(
      *grid, f.dofs, fields.alpha_bar(), 1.0,
      [&](double a, double b) { return fields.phi_point(a, b); }, xr, 1.0,
      1.0 / fields.width(), trip);
  f.A = from_triplets(f.dofs.n_dofs, trip);
  f.M = assemble_mass_matrix(*grid, f.dofs);
  return f;
}

std::pair<FormPair, FormPair> assemble_dots(double t, double beta,
                                            double alpha_bar,
                                            const GridPtr& grid, int k_max,
                                            double h) {
  if (h <= 0.0) h = 1e-6 * t;
  if (t <= 2.0 * h)
    throw StepTooSmall("assemble_dots: need t > 2h (t = " + std::to_string(t) +
                       ", h = " + std::to_string(h) + ")");
  FormPair adot = assemble_adot(t, grid, k_max);
  FormPair qp = assemble_q(DiffeoFields::degenerating(t + h, beta, alpha_bar),
                           grid, k_max);
  FormPair qm = assemble_q(DiffeoFields::degenerating(t - h, beta, alpha_bar),
                           grid, k_max);
  FormPair qdot = qp;
  qdot.t = t;
  qdot.kind = FormKind::QDot;
  qdot.A = symmetrized(SpMat((qp.A - qm.A) / (2.0 * h)));
  return {std::move(adot), std::move(qdot)};
}

EigSolveResult solve_lowest(const FormPair& form, int count,
                            std::optional<double> sigma,
                            const EigOptions& opts) {
  EigPairs pairs = solve_pairs(form.A, form.M, count, sigma, opts);
  EigSolveResult out;
  out.iterations = pairs.iterations;
  for (long j = 0; j < pairs.values.size(); ++j) {
    out.eigenvalues.push_back(pairs.values[j]);
    out.eigenvectors.push_back(form.expand(pairs.vectors.col(j)));
    out.residuals.push_back(pairs.residuals.size() > j ? pairs.residuals[j]
                                                       : 0.0);
  }
  return out;
}

ModeBlock mode_block(const FormPair& form, int ell) {
  ModeBlock out;
  std::vector<int> gather;
  for (std::size_t i = 0; i < form.dofs.n_nodes; ++i) {
    const int d = form.dofs(i, ell);
    if (d >= 0) {
      gather.push_back(d);
      out.nodes.push_back(i);
    }
  }
  const int nb = static_cast<int>(gather.size());
  std::vector<int> inv(form.dofs.n_dofs, -1);
  for (int j = 0; j < nb; ++j) inv[gather[j]] = j;
  Triplets ta, tm;
  for (int c = 0; c < form.A.outerSize(); ++c)
    for (SpMat::InnerIterator it(form.A, c); it; ++it) {
      const int r = inv[it.row()], cc = inv[it.col()];
      if (r >= 0 && cc >= 0) ta.emplace_back(r, cc, it.value());
    }
  for (int c = 0; c < form.M.outerSize(); ++c)
    for (SpMat::InnerIterator it(form.M, c); it; ++it) {
      const int r = inv[it.row()], cc = inv[it.col()];
      if (r >= 0 && cc >= 0) tm.emplace_back(r, cc, it.value());
    }
  out.A = from_triplets(nb, ta);
  out.M = from_triplets(nb, tm);
  return out;
}

ExpansionReport check_expansion(double beta, double alpha_bar,
                                const GridPtr& grid, int k_max,
                                const ModeFunction& u, const ModeFunction& v,
                                const std::vector<double>& t_list) {
  ExpansionReport rep;
  const Poly3 p = p_poly(alpha_bar);
  for (double t : t_list) {
    const auto fields = DiffeoFields::degenerating(t, beta, alpha_bar);
    const FormPair q = assemble_q(fields, grid, k_max);
    const FormPair a = assemble_a(t, grid, k_max);
    const FormPair b = assemble_b(t, grid, k_max, p, alpha_bar);
    const double qv = q.bilinear(u, v);
    const double av = a.bilinear(u, v);
    const double bv = b.bilinear(u, v);
    rep.t.push_back(t);
    rep.diff_qab.push_back(std::abs(qv - av - t * bv));
    rep.diff_qa.push_back(std::abs(qv - av));
  }
  rep.slope_qab = fit_loglog(rep.t, rep.diff_qab, 1e-300);
  rep.slope_qa = fit_loglog(rep.t, rep.diff_qa, 1e-300);
  return rep;
}

}  // namespace cusp
