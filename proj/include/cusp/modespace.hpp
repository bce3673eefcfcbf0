#pragma once

// Discrete functions on the strip S = [0,1] x [1, y_max]: Fourier-cosine
// modes e_0 = 1, e_k = sqrt(2) cos(k pi x) in x, continuous piecewise-linear
// profiles on a y-grid, zeroth mode constrained to vanish for y >= beta.

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cusp/errors.hpp"

namespace cusp {

struct CuspGrid {
  std::vector<double> y;      // strictly increasing nodes, y[0] = 1
  std::size_t beta_index = 0; // y[beta_index] == beta
  double beta = 0.0;
  double alpha_bar = 0.0;     // 0 when not a grid breakpoint
  double layer_width = 0.0;   // graded-mesh metadata
  double h_min = 0.0;
  int quad_order = 4;         // Gauss points per cell

  std::size_t n_nodes() const { return y.size(); }
  std::size_t n_cells() const { return y.size() - 1; }
  double y_max() const { return y.back(); }

  // Index of a node equal to `value` (within 1e-12); throws BetaNotOnGrid.
  std::size_t node_at(double value) const;
};

using GridPtr = std::shared_ptr<const CuspGrid>;

// Layer-resolving mesh: spacing t_min^{2/3}/n_layer inside the boundary
// layer [1, 1 + 10 t_min^{2/3}], geometric coarsening (ratio `growth`) up to
// h_max outside; alpha_bar, beta and y_max land exactly on nodes.
GridPtr graded_grid(double t_min, double beta, double alpha_bar, double y_max,
                    double h_max = 0.05, int n_layer = 16,
                    double growth = 1.2, int quad_order = 4);

// n cells uniform in y on [1, y_end]; beta must be one of the nodes if
// beta > 0 is given (it is inserted by construction when y_end == beta).
GridPtr uniform_grid(double y_end, std::size_t n, double beta = 0.0,
                     int quad_order = 4);

// n cells uniform in log y on [1, y_end].
GridPtr log_grid(double y_end, std::size_t n, double beta = 0.0,
                 int quad_order = 4);

class ModeFunction {
 public:
  ModeFunction() = default;
  ModeFunction(GridPtr grid, int k_max);

  static ModeFunction zeros(GridPtr grid, int k_max);

  const GridPtr& grid() const { return grid_; }
  int k_max() const { return k_max_; }

  Eigen::VectorXd& profile(int k);
  const Eigen::VectorXd& profile(int k) const;

  // Pointwise evaluation u(x, y) (P1 in y, cosine modes in x).
  double operator()(double x, double y) const;

  ModeFunction& operator*=(double s);
  ModeFunction& operator+=(const ModeFunction& other);

  void write_csv(std::ostream& os) const;
  void write_binary(std::ostream& os) const;
  static ModeFunction read_binary(std::istream& is);

 private:
  GridPtr grid_;
  int k_max_ = 0;
  std::vector<Eigen::VectorXd> profiles_;
};

// sum_k int u^k v^k y^-2 dy by per-cell Gauss quadrature.
double inner_product(const ModeFunction& u, const ModeFunction& v);
double norm(const ModeFunction& u);

// Keeps only mode ell.
ModeFunction project_mode(const ModeFunction& u, int ell);
// Keeps modes strictly below k.
ModeFunction project_below(const ModeFunction& u, int k);
// Zeroes the zeroth profile at nodes with y >= beta.
ModeFunction truncate_zero_mode(const ModeFunction& u, double beta);

// e_k(x); e_0 = 1, e_k = sqrt(2) cos(k pi x).
double mode_basis(int k, double x);
double mode_basis_deriv(int k, double x);

}  // namespace cusp
