#pragma once

// Assembly of the quadratic forms over ModeFunction degrees of freedom:
// the separated reference form a_t, the first-order coupling b_t, the full
// pulled-back form q_t (renormalized degenerating family or a generic
// moduli point), their t-derivatives, and the shifted form a_t + ||.||^2.
// Constrained DOFs (zeroth mode above beta, top boundary) are eliminated.

#include <Eigen/Sparse>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "cusp/eigensolve.hpp"
#include "cusp/geometry.hpp"
#include "cusp/modespace.hpp"

namespace cusp {

enum class FormKind { Q, AModel, BCoupling, ADot, QDot, ATilde, Mass };

struct DofMap {
  int k_max = 0;
  std::size_t n_nodes = 0;
  std::vector<int> idx;  // node-major: idx[node * (k_max+1) + k], -1 if gone
  int n_dofs = 0;

  int operator()(std::size_t node, int k) const {
    return idx[node * (k_max + 1) + k];
  }
};

DofMap make_dof_map(const CuspGrid& grid, int k_max);

struct FormPair {
  SpMat A;
  SpMat M;
  double t = 0.0;
  FormKind kind = FormKind::Q;
  GridPtr grid;
  int k_max = 0;
  DofMap dofs;

  Eigen::VectorXd restrict_nodal(const ModeFunction& u) const;
  ModeFunction expand(const Eigen::VectorXd& dofs_vec) const;

  double bilinear(const ModeFunction& u, const ModeFunction& v) const;
  double mass_bilinear(const ModeFunction& u, const ModeFunction& v) const;

  // Coordinate text dump (row col value), one entry per line.
  void dump_coords(std::ostream& os) const;
};

// Separated reference form: per mode k, t^2 K + (k pi)^2 M0 against the
// y^-2-weighted mass.
FormPair assemble_a(double t, const GridPtr& grid, int k_max);

// a_t + ||.||^2 realized as (A + M, M).
FormPair assemble_atilde(double t, const GridPtr& grid, int k_max);

// Exact derivative d/dt a_t = 2 t K per mode.
FormPair assemble_adot(double t, const GridPtr& grid, int k_max);

// First-order coupling over S_- with the antidiagonal matrix x p(y).
FormPair assemble_b(double t, const GridPtr& grid, int k_max, const Poly3& p,
                    double alpha_bar);

// Full renormalized form of the degenerating family at fields.t().
FormPair assemble_q(const DiffeoFields& fields, const GridPtr& grid,
                    int k_max);

// Generic moduli point (unrenormalized, width w).
FormPair assemble_q_moduli(const DiffeoFields& fields, const GridPtr& grid,
                           int k_max);

// (exact a-dot, symmetrized centered difference of q). h defaults to 1e-6 t.
std::pair<FormPair, FormPair> assemble_dots(double t, double beta,
                                            double alpha_bar,
                                            const GridPtr& grid, int k_max,
                                            double h = 0.0);

struct EigSolveResult {
  std::vector<double> eigenvalues;
  std::vector<ModeFunction> eigenvectors;  // M-orthonormal
  std::vector<double> residuals;
  int iterations = 0;
};

EigSolveResult solve_lowest(const FormPair& form, int count,
                            std::optional<double> sigma = std::nullopt,
                            const EigOptions& opts = {});

// Extracted single-mode block of a block-diagonal form, with the list of
// grid nodes carrying its DOFs (ordered).
struct ModeBlock {
  SpMat A;
  SpMat M;
  std::vector<std::size_t> nodes;
};

ModeBlock mode_block(const FormPair& form, int ell);

struct ExpansionReport {
  std::vector<double> t;
  std::vector<double> diff_qab;  // |q - a - t b|
  std::vector<double> diff_qa;   // |q - a|
  LineFit slope_qab;
  LineFit slope_qa;
};

// Log-log slopes of the expansion defects on fixed u, v over t_list.
ExpansionReport check_expansion(double beta, double alpha_bar,
                                const GridPtr& grid, int k_max,
                                const ModeFunction& u, const ModeFunction& v,
                                const std::vector<double>& t_list);

// Number of x-quadrature nodes used against mode cutoff k_max.
QuadRule x_rule(int k_max);

}  // namespace cusp
