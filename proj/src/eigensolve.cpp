#include "cusp/eigensolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace cusp {

namespace {

Eigen::VectorXd residuals_of(const SpMat& A, const SpMat& M,
                             const Eigen::SimplicialLLT<SpMat>& mchol,
                             const Eigen::VectorXd& vals,
                             const Eigen::MatrixXd& vecs) {
  Eigen::VectorXd out(vals.size());
  for (long j = 0; j < vals.size(); ++j) {
    Eigen::VectorXd r = A * vecs.col(j) - vals[j] * (M * vecs.col(j));
    const double nr = std::sqrt(std::max(0.0, r.dot(mchol.solve(r))));
    out[j] = nr / (1.0 + std::abs(vals[j]));
  }
  return out;
}

EigPairs select_pairs(const Eigen::VectorXd& vals, const Eigen::MatrixXd& vecs,
                      int count, std::optional<double> sigma) {
  std::vector<long> idx(vals.size());
  for (long i = 0; i < vals.size(); ++i) idx[i] = i;
  if (sigma) {
    std::sort(idx.begin(), idx.end(), [&](long a, long b) {
      return std::abs(vals[a] - *sigma) < std::abs(vals[b] - *sigma);
    });
  } else {
    std::sort(idx.begin(), idx.end(),
              [&](long a, long b) { return vals[a] < vals[b]; });
  }
  idx.resize(std::min(idx.size(), static_cast<std::size_t>(count)));
  std::sort(idx.begin(), idx.end(),
            [&](long a, long b) { return vals[a] < vals[b]; });
  EigPairs out;
  out.values.resize(static_cast<long>(idx.size()));
  out.vectors.resize(vecs.rows(), static_cast<long>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.values[static_cast<long>(j)] = vals[idx[j]];
    out.vectors.col(static_cast<long>(j)) = vecs.col(idx[j]);
  }
  return out;
}

}  // namespace

EigPairs solve_dense_all(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  if (es.info() != Eigen::Success)
    throw SolverNoConvergence("dense generalized eigensolver failed");
  EigPairs out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

EigPairs solve_pairs(const SpMat& A, const SpMat& M, int count,
                     std::optional<double> sigma, const EigOptions& opts) {
  const long n = A.rows();
  if (A.cols() != n || M.rows() != n || M.cols() != n)
    throw Error("solve_pairs: dimension mismatch");
  count = static_cast<int>(std::min<long>(count, n));

  Eigen::SimplicialLLT<SpMat> mchol(M);
  if (mchol.info() != Eigen::Success)
    throw SolverNoConvergence("mass matrix is not positive definite");

  const bool dense = !opts.force_iterative &&
                     (opts.force_dense || n <= opts.dense_threshold);
  if (dense) {
    EigPairs all = solve_dense_all(Eigen::MatrixXd(A), Eigen::MatrixXd(M));
    EigPairs out = select_pairs(all.values, all.vectors, count, sigma);
    out.residuals = residuals_of(A, M, mchol, out.values, out.vectors);
    return out;
  }

  // Shift-invert Lanczos in the M-inner product on Op = (A - s M)^{-1} M.
  double shift;
  if (sigma) {
    shift = *sigma;
  } else {
    double trA = 0.0, trM = 0.0;
    for (long i = 0; i < n; ++i) {
      trA += A.coeff(i, i);
      trM += M.coeff(i, i);
    }
    shift = -1e-9 * std::abs(trA / trM) - 1e-300;
  }

  SpMat K = A - shift * M;
  Eigen::SparseLU<SpMat> klu;
  klu.analyzePattern(K);
  klu.factorize(K);
  if (klu.info() != Eigen::Success)
    throw SolverNoConvergence("shift matrix factorization failed");

  const int m_max = static_cast<int>(
      opts.max_subspace > 0
          ? opts.max_subspace
          : std::min<long>(n, std::max(240, 8L * count + 60)));

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v0(n);
  for (long i = 0; i < n; ++i) v0[i] = gauss(rng);

  std::vector<Eigen::VectorXd> V;
  std::vector<double> alpha, beta;
  v0 /= std::sqrt(v0.dot(M * v0));
  V.push_back(v0);

  // Ritz extraction from the current Lanczos subspace.
  auto ritz = [&](int k) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(T);
    Eigen::VectorXd theta = tes.eigenvalues();
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a2, int b2) {
      return std::abs(theta[a2]) > std::abs(theta[b2]);
    });
    const int take = std::min(count, k);
    Eigen::VectorXd vals(take);
    Eigen::MatrixXd vecs(n, take);
    for (int j = 0; j < take; ++j) {
      const int jj = order[j];
      vals[j] = shift + 1.0 / theta[jj];
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < k; ++i) y += tes.eigenvectors()(i, jj) * V[i];
      vecs.col(j) = y / std::sqrt(y.dot(M * y));
    }
    EigPairs sel = select_pairs(vals, vecs, take, std::nullopt);
    sel.residuals = residuals_of(A, M, mchol, sel.values, sel.vectors);
    sel.iterations = k;
    return sel;
  };

  bool breakdown = false;
  for (int m = 0; m < m_max; ++m) {
    Eigen::VectorXd w = klu.solve(M * V[static_cast<std::size_t>(m)]);
    if (m > 0) w -= beta[static_cast<std::size_t>(m - 1)] * V[static_cast<std::size_t>(m - 1)];
    const double a = w.dot(M * V[static_cast<std::size_t>(m)]);
    alpha.push_back(a);
    w -= a * V[static_cast<std::size_t>(m)];
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd Mw = M * w;
      for (const auto& q : V) w -= q.dot(Mw) * q;
    }
    const double b = std::sqrt(std::max(0.0, w.dot(M * w)));
    const int k = m + 1;
    if (b < 1e-13) {
      breakdown = true;
    } else {
      beta.push_back(b);
      V.push_back(w / b);
    }

    const bool due = (k >= std::max(2 * count, count + 8)) &&
                     (k % 10 == 0 || breakdown || k == m_max);
    if (!due && !breakdown) continue;

    EigPairs sel = ritz(k);
    if (sel.residuals.size() > 0 && sel.residuals.maxCoeff() <= opts.tol)
      return sel;
    if (breakdown || k == m_max) {
      if (sel.residuals.size() > 0 && sel.residuals.maxCoeff() <= opts.tol)
        return sel;
      throw SolverNoConvergence(
          "Lanczos stalled: subspace " + std::to_string(k) +
          ", worst residual " +
          std::to_string(sel.residuals.size() ? sel.residuals.maxCoeff()
                                              : -1.0));
    }
  }
  throw SolverNoConvergence("Lanczos exhausted the subspace budget");
}

}  // namespace cusp
