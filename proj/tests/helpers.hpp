#pragma once

#include <random>

#include "lyapkit/linops.hpp"

namespace lyapkit::testing {

inline DenseMatrix random_dense(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  DenseMatrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = dist(gen);
  return M;
}

inline ComplexDenseMatrix random_cdense(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  DenseMatrix re = random_dense(rows, cols, seed);
  DenseMatrix im = random_dense(rows, cols, seed + 1);
  return re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
}

// Random dense stable matrix: -(G G^T)/n - I is symmetric negative definite;
// the optional skew part makes it nonsymmetric while keeping Re(spec) < 0.
inline DenseMatrix random_stable(Eigen::Index n, unsigned seed, double skew = 0.0) {
  DenseMatrix G = random_dense(n, n, seed);
  DenseMatrix A = -(G * G.transpose()) / static_cast<double>(n) - DenseMatrix::Identity(n, n);
  if (skew != 0.0) {
    DenseMatrix K = random_dense(n, n, seed + 7);
    A += skew * (K - K.transpose());
  }
  return A;
}

inline SparseMatrix to_sparse(const DenseMatrix& M) {
  return M.sparseView();
}

inline double lyap_residual_rel(const DenseMatrix& A, const DenseMatrix& X, const DenseMatrix& B) {
  return (A * X + X * A.transpose() + B * B.transpose()).norm() / (B.transpose() * B).norm();
}

}  // namespace lyapkit::testing
