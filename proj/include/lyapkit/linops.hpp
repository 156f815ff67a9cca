#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "lyapkit/errors.hpp"

namespace lyapkit {

using DenseMatrix = Eigen::MatrixXd;
using ComplexDenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Complex = std::complex<double>;

// Reusable sparse LU solve handle for a fixed square real matrix.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& A);

  // Solves A * X = rhs for dense rhs with any column count.
  DenseMatrix solve(const DenseMatrix& rhs) const;
  Eigen::Index dim() const { return n_; }

 private:
  std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
  Eigen::Index n_;
};

inline Factorization factorize(const SparseMatrix& A) { return Factorization(A); }

// Bundles apply (A.) and inv_apply (A^{-1}.) for a stable matrix, hiding
// whether A is explicit sparse or a composed transform.
class StableOperator {
 public:
  virtual ~StableOperator() = default;
  virtual Eigen::Index dim() const = 0;
  virtual DenseMatrix apply(const DenseMatrix& X) const = 0;
  virtual DenseMatrix inv_apply(const DenseMatrix& X) const = 0;
  virtual bool symmetric() const { return false; }
};

// Explicit sparse A; the LU factors are computed once in the constructor.
class SparseOperator final : public StableOperator {
 public:
  explicit SparseOperator(SparseMatrix A, bool symmetric = false);

  Eigen::Index dim() const override { return A_.rows(); }
  DenseMatrix apply(const DenseMatrix& X) const override { return A_ * X; }
  DenseMatrix inv_apply(const DenseMatrix& X) const override { return lu_.solve(X); }
  bool symmetric() const override { return symmetric_; }
  const SparseMatrix& matrix() const { return A_; }

 private:
  SparseMatrix A_;
  Factorization lu_;
  bool symmetric_;
};

struct EconomyQR {
  DenseMatrix Q;  // n x k, orthonormal columns
  DenseMatrix R;  // k x k, upper triangular, nonnegative diagonal
  bool rank_deficient = false;
};

// Economy-size QR with a deterministic sign convention (nonnegative diagonal
// of R). Rank deficiency relative to tau_rank * ||X||_F is reported, not
// raised; callers decide.
EconomyQR economy_qr(const DenseMatrix& X, double tau_rank = 1e-12);

// Small dense complex solve M * Y = rhs. Throws SingularProjectedSystem when
// M is singular to working precision (-p equals a Ritz value).
ComplexDenseMatrix dense_solve_cx(const ComplexDenseMatrix& M, const ComplexDenseMatrix& rhs);

struct LstsqResult {
  ComplexDenseMatrix Y;   // k x q, minimizes ||M Y - rhs||_F
  ComplexDenseMatrix Q2;  // r x (r-k), orthonormal basis of range(M)^perp
};

// Tall least squares via QR; also returns the kernel-basis block Q2 used for
// the cheap residual norm. Throws RankDeficientLS on rank-deficient M.
LstsqResult dense_lstsq_cx(const ComplexDenseMatrix& M, const ComplexDenseMatrix& rhs);

struct EigPair {
  Complex value;
  Eigen::VectorXcd vector;  // unit 2-norm
};

std::vector<EigPair> dense_eig(const DenseMatrix& M);

// Solves (A + pI) S = W for real sparse A, real W, and complex p, through the
// real augmented 2n x 2n system [[A+tI, -xI],[xI, A+tI]] on [Re S; Im S].
ComplexDenseMatrix shifted_solve(const SparseMatrix& A, Complex p, const DenseMatrix& W);

// Shifted-solve front end caching one factorization per distinct shift value.
class ShiftedSolver {
 public:
  explicit ShiftedSolver(SparseMatrix A);

  DenseMatrix solve_real(double p, const DenseMatrix& W);
  ComplexDenseMatrix solve_complex(Complex p, const DenseMatrix& W);
  const SparseMatrix& matrix() const { return A_; }

 private:
  const Factorization& factor_for(Complex p);

  SparseMatrix A_;
  std::map<std::pair<double, double>, Factorization> cache_;
};

inline SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix I(n, n);
  I.setIdentity();
  return I;
}

}  // namespace lyapkit
