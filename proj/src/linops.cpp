#include "lyapkit/linops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lyapkit {

Factorization::Factorization(const SparseMatrix& A) : n_(A.rows()) {
  if (A.rows() != A.cols()) throw std::invalid_argument("Factorization: matrix must be square");
  lu_ = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
  SparseMatrix Ac = A;
  Ac.makeCompressed();
  lu_->analyzePattern(Ac);
  lu_->factorize(Ac);
  if (lu_->info() != Eigen::Success) {
    throw SingularMatrix("sparse LU failed: " + lu_->lastErrorMessage());
  }
}

DenseMatrix Factorization::solve(const DenseMatrix& rhs) const {
  return lu_->solve(rhs);
}

SparseOperator::SparseOperator(SparseMatrix A, bool symmetric)
    : A_(std::move(A)), lu_(A_), symmetric_(symmetric) {}

EconomyQR economy_qr(const DenseMatrix& X, double tau_rank) {
  const Eigen::Index n = X.rows(), k = X.cols();
  if (n < k) throw std::invalid_argument("economy_qr: need n >= k");
  Eigen::HouseholderQR<DenseMatrix> qr(X);
  EconomyQR out;
  out.Q = qr.householderQ() * DenseMatrix::Identity(n, k);
  out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  // Sign convention: nonnegative R diagonal, so bases are deterministic.
  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.R(i, i) < 0.0) {
      out.R.row(i) = -out.R.row(i);
      out.Q.col(i) = -out.Q.col(i);
    }
  }
  const double scale = X.norm();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(out.R(i, i)) <= tau_rank * scale) {
      out.rank_deficient = true;
      break;
    }
  }
  return out;
}

ComplexDenseMatrix dense_solve_cx(const ComplexDenseMatrix& M, const ComplexDenseMatrix& rhs) {
  if (M.rows() != M.cols()) throw std::invalid_argument("dense_solve_cx: matrix must be square");
  Eigen::FullPivLU<ComplexDenseMatrix> lu(M);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw SingularProjectedSystem("projected system singular: shift matches a Ritz value");
  }
  return lu.solve(rhs);
}

LstsqResult dense_lstsq_cx(const ComplexDenseMatrix& M, const ComplexDenseMatrix& rhs) {
  const Eigen::Index r = M.rows(), k = M.cols();
  if (r < k) throw std::invalid_argument("dense_lstsq_cx: need r >= k");
  Eigen::HouseholderQR<ComplexDenseMatrix> qr(M);
  ComplexDenseMatrix Qfull = qr.householderQ() * ComplexDenseMatrix::Identity(r, r);
  ComplexDenseMatrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const double scale = M.norm();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(R(i, i)) <= 1e-13 * scale) {
      throw RankDeficientLS("least-squares matrix numerically rank deficient");
    }
  }
  LstsqResult out;
  out.Y = R.triangularView<Eigen::Upper>().solve(Qfull.leftCols(k).adjoint() * rhs);
  out.Q2 = Qfull.rightCols(r - k);
  return out;
}

std::vector<EigPair> dense_eig(const DenseMatrix& M) {
  Eigen::EigenSolver<DenseMatrix> es(M, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw EigFailure("dense eigensolver did not converge");
  std::vector<EigPair> out;
  out.reserve(M.rows());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    EigPair p;
    p.value = es.eigenvalues()(i);
    p.vector = es.eigenvectors().col(i);
    p.vector /= p.vector.norm();
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

SparseMatrix augmented_shift_matrix(const SparseMatrix& A, double theta, double xi) {
  const Eigen::Index n = A.rows();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * A.nonZeros() + 4 * n);
  for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(A, c); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
      trip.emplace_back(n + it.row(), n + it.col(), it.value());
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, theta);
    trip.emplace_back(n + i, n + i, theta);
    trip.emplace_back(i, n + i, -xi);
    trip.emplace_back(n + i, i, xi);
  }
  SparseMatrix M(2 * n, 2 * n);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SparseMatrix real_shift_matrix(const SparseMatrix& A, double p) {
  SparseMatrix M = A;
  for (Eigen::Index i = 0; i < A.rows(); ++i) M.coeffRef(i, i) += p;
  M.makeCompressed();
  return M;
}

}  // namespace

ComplexDenseMatrix shifted_solve(const SparseMatrix& A, Complex p, const DenseMatrix& W) {
  const Eigen::Index n = A.rows();
  if (p.imag() == 0.0) {
    Factorization f(real_shift_matrix(A, p.real()));
    return f.solve(W).cast<Complex>();
  }
  Factorization f(augmented_shift_matrix(A, p.real(), p.imag()));
  DenseMatrix rhs = DenseMatrix::Zero(2 * n, W.cols());
  rhs.topRows(n) = W;
  DenseMatrix sol = f.solve(rhs);
  ComplexDenseMatrix S(n, W.cols());
  S.real() = sol.topRows(n);
  S.imag() = sol.bottomRows(n);
  return S;
}

ShiftedSolver::ShiftedSolver(SparseMatrix A) : A_(std::move(A)) {}

const Factorization& ShiftedSolver::factor_for(Complex p) {
  auto key = std::make_pair(p.real(), p.imag());
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    SparseMatrix M = (p.imag() == 0.0) ? real_shift_matrix(A_, p.real())
                                       : augmented_shift_matrix(A_, p.real(), p.imag());
    it = cache_.emplace(key, Factorization(M)).first;
  }
  return it->second;
}

DenseMatrix ShiftedSolver::solve_real(double p, const DenseMatrix& W) {
  return factor_for(Complex(p, 0.0)).solve(W);
}

ComplexDenseMatrix ShiftedSolver::solve_complex(Complex p, const DenseMatrix& W) {
  const Eigen::Index n = A_.rows();
  if (p.imag() == 0.0) return solve_real(p.real(), W).cast<Complex>();
  const Factorization& f = factor_for(p);
  DenseMatrix rhs = DenseMatrix::Zero(2 * n, W.cols());
  rhs.topRows(n) = W;
  DenseMatrix sol = f.solve(rhs);
  ComplexDenseMatrix S(n, W.cols());
  S.real() = sol.topRows(n);
  S.imag() = sol.bottomRows(n);
  return S;
}

}  // namespace lyapkit
