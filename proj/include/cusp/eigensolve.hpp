#pragma once

// Generalized symmetric eigensolver: A v = lambda M v with M positive
// definite. Dense path (oracle) for small systems, M-inner-product
// shift-invert Lanczos with full reorthogonalization otherwise.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <optional>

#include "cusp/errors.hpp"

namespace cusp {

using SpMat = Eigen::SparseMatrix<double>;

struct EigOptions {
  double tol = 1e-9;          // relative residual tolerance
  int max_subspace = 0;       // 0: automatic
  std::uint64_t seed = 12345; // start-vector seed (deterministic)
  int dense_threshold = 2000; // use the dense oracle path up to this size
  bool force_dense = false;
  bool force_iterative = false;
};

struct EigPairs {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXd vectors;    // M-orthonormal columns
  Eigen::VectorXd residuals;  // ||A v - lambda M v||_{M^-1} / (1 + |lambda|)
  int iterations = 0;
};

// The `count` smallest eigenpairs, or the `count` pairs nearest `sigma`
// when given (returned sorted ascending either way).
EigPairs solve_pairs(const SpMat& A, const SpMat& M, int count,
                     std::optional<double> sigma = std::nullopt,
                     const EigOptions& opts = {});

// Dense oracle (all eigenpairs), exposed for cross-checks.
EigPairs solve_dense_all(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

}  // namespace cusp
