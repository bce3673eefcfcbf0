#pragma once

// Spectral theory of the separated operators: the zero-mode log-oscillator
// spectrum (secular equation 2r = tan(r ln beta)), nonzero-mode 1-D branches
// with their t^{2/3} law, the rescaled small-t eigenproblem, WKB and Airy
// solution bases, and localization measurements.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cusp/airy.hpp"
#include "cusp/eigensolve.hpp"
#include "cusp/modespace.hpp"

namespace cusp {

struct ZeroModeSpectrum {
  double beta = 0.0;
  double t = 0.0;
  std::vector<double> roots;        // ascending positive roots r_n
  std::vector<double> eigenvalues;  // t^2 (1/4 + r_n^2)

  // Eigenvector of the n-th root (0-based index into roots):
  // psi(y) = sqrt(y) cos(r ln y) - sqrt(y)/(2r) sin(r ln y).
  double psi(int n, double y) const;
  double psi_deriv(int n, double y) const;
};

ZeroModeSpectrum zero_mode_spectrum(double t, double beta, int n_max);

// 1-D P1 pieces on a y-grid: K = int v'w' dy, M0 = int vw dy,
// My = int vw y^-2 dy; natural condition on the left, Dirichlet on the
// right (last node eliminated).
struct Ode1D {
  SpMat K, M0, My;
  GridPtr grid;
  Eigen::VectorXd expand(const Eigen::VectorXd& interior) const;
};

Ode1D assemble_ode1d(const GridPtr& grid);

struct ModelBranch {
  int ell = 1;
  int index = 1;  // 1-based branch index
  GridPtr grid;
  std::vector<double> t;
  std::vector<double> lambda;
  std::vector<Eigen::VectorXd> profiles;  // full nodal values, My-normalized
  double airy_a = 0.0;                    // (2 (pi ell)^2)^{2/3} (-zeta_index)
};

// Lowest `branch_count` eigenvalue branches of the separated mode-ell
// operator over t_list, index-matched by profile overlap. With
// `richardson`, eigenvalues are extrapolated from the grid and its
// once-refined version.
std::vector<ModelBranch> mode_branch(int ell, const std::vector<double>& t_list,
                                     int branch_count, const GridPtr& grid,
                                     bool richardson = false);

struct AiryPrediction {
  double a = 0.0;  // coefficient of t^{2/3}
  double zeta = 0.0;
  std::function<double(double)> lambda_hat;  // (ell pi)^2 + a t^{2/3}
};

AiryPrediction airy_predict(int ell, int branch_index);

// Lowest `count` eigenvalues of the rescaled pair on [0, x_max] with
// f(z) = (z+1)^{-2}, g(z) = (z+2)/(z+1)^2 frozen at s = 0 to f = 1, g = 2.
std::vector<double> rescaled_spectrum(double s, double mu, int count,
                                      double x_max = 8.0, int n_cells = 4000,
                                      bool richardson = true);

struct WkbBasis {
  double mu = 0.0, t = 0.0, beta = 0.0;
  int ell = 0;
  double f(double y) const;            // mu / y^2 - (ell pi)^2
  double amplitude(double y) const;    // |f|^{-1/4}
  double phase(double y) const;        // int_1^y sqrt(f)
  double value_cos(double y) const;    // amplitude * cos(phase / t)
  double value_sin(double y) const;

  // Sup-relative deviation between the cos-branch ansatz and the exact
  // solution with matched data at y = 1.
  double verify_deviation(int n_steps = 20000) const;
};

WkbBasis wkb_basis(int ell, double mu, double t, double beta);

struct AiryBasis {
  double s = 0.0, z_s = 0.0;
  double plus(double x) const;
  double minus(double x) const;
  double plus_prime(double x) const;
  double minus_prime(double x) const;
  double wronskian_exact() const { return 2.0 * std::pow(s, -2.0 / 3.0); }

  // Variation-of-constants particular solution of
  // -s^2 W'' + (x - z_s) W = R on [0, xbar], tabulated with derivative.
  struct Particular {
    HermiteTable table;
    double value(double x) const { return table.value(x); }
    double deriv(double x) const { return table.deriv(x); }
  };
  Particular particular(const std::function<double(double)>& R, double xbar,
                        int n_cells = 2000) const;
};

AiryBasis airy_basis(double s, double z_s);

// Tail mass ratio of a nodal profile beyond y = 1 + 2 t^alpha in the
// y^-2-weighted norm.
double measure_localization(const Eigen::VectorXd& profile, const CuspGrid& g,
                            double t, double alpha);

}  // namespace cusp
