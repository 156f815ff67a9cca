#include "lyapkit/testlab.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <random>

namespace lyapkit {

namespace {

SparseMatrix tridiag(int h, double sub, double diag, double sup) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * h);
  for (int i = 0; i < h; ++i) {
    trip.emplace_back(i, i, diag);
    if (i > 0) trip.emplace_back(i, i - 1, sub);
    if (i + 1 < h) trip.emplace_back(i, i + 1, sup);
  }
  SparseMatrix T(h, h);
  T.setFromTriplets(trip.begin(), trip.end());
  return T;
}

SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(A.nonZeros()) * B.nonZeros());
  for (Eigen::Index ca = 0; ca < A.outerSize(); ++ca) {
    for (SparseMatrix::InnerIterator ia(A, ca); ia; ++ia) {
      for (Eigen::Index cb = 0; cb < B.outerSize(); ++cb) {
        for (SparseMatrix::InnerIterator ib(B, cb); ib; ++ib) {
          trip.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(),
                            ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseMatrix kron3(const SparseMatrix& A, const SparseMatrix& B, const SparseMatrix& C) {
  return kron(kron(A, B), C);
}

SparseMatrix diag_sparse(const Eigen::VectorXd& d) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) trip.emplace_back(i, i, d(i));
  SparseMatrix D(d.size(), d.size());
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

DenseMatrix random_rhs(Eigen::Index n, int q, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  DenseMatrix B(n, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) B(i, j) = dist(gen);
  }
  return B / B.norm();
}

}  // namespace

GeneratedProblem gen_laplacian2d(int h, int q, RhsKind b_kind, unsigned seed) {
  if (h < 2) throw std::invalid_argument("gen_laplacian2d: need h >= 2");
  SparseMatrix D = tridiag(h, 1.0, -2.0, 1.0);
  SparseMatrix I = sparse_identity(h);
  GeneratedProblem out;
  out.A = kron(I, D) + kron(D, I);
  const Eigen::Index n = out.A.rows();
  if (b_kind == RhsKind::Ones) {
    out.B = DenseMatrix::Ones(n, q);
    out.B /= out.B.norm();
  } else {
    out.B = random_rhs(n, q, seed);
  }
  out.name = "laplacian2d";
  out.h = h;
  out.q = q;
  out.seed = seed;
  out.symmetric = true;
  return out;
}

GeneratedProblem gen_convdiff3d(int h, double zeta, unsigned seed, int q, bool with_convection) {
  if (h < 3) throw std::invalid_argument("gen_convdiff3d: need h >= 3");
  if (zeta <= 0.0) throw std::invalid_argument("gen_convdiff3d: need zeta > 0");
  const double scale = zeta * (h - 1.0) * (h - 1.0);
  SparseMatrix D = tridiag(h, -scale, 2.0 * scale, -scale);
  SparseMatrix N = tridiag(h, (h - 1.0) / 2.0, 0.0, -(h - 1.0) / 2.0);
  SparseMatrix I = sparse_identity(h);

  // Nodal values on the uniform grid t_i = i/(h-1), i = 0..h-1.
  Eigen::VectorXd t(h);
  for (int i = 0; i < h; ++i) t(i) = static_cast<double>(i) / (h - 1.0);
  SparseMatrix Phi1 = diag_sparse((1.0 - t.array().square()).matrix());  // 1 - x^2
  SparseMatrix Psi1 = diag_sparse(t);                                    // y
  SparseMatrix Pi1 = diag_sparse(t);                                     // z
  SparseMatrix Pi3 = diag_sparse(t.array().exp().matrix());              // e^z

  SparseMatrix M = kron3(I, D, I) + kron3(I, I, D);
  if (with_convection) {
    M = M + kron3(SparseMatrix(D + Pi3 * SparseMatrix(N.transpose())), I, I) +
        kron3(Pi1, Psi1, SparseMatrix(Phi1 * N));
  } else {
    M = M + kron3(D, I, I);
  }

  GeneratedProblem out;
  out.A = -M;  // the discretized operator is definite; negate for stability
  out.B = random_rhs(out.A.rows(), q, seed);
  out.name = "convdiff3d";
  out.h = h;
  out.zeta = zeta;
  out.q = q;
  out.seed = seed;
  out.symmetric = false;
  return out;
}

namespace {

class DiagTransformOperator final : public StableOperator {
 public:
  DiagTransformOperator(SparseMatrix A, Eigen::VectorXd inv_sqrt_e)
      : A_(std::move(A)), lu_(A_), s_(std::move(inv_sqrt_e)) {}

  Eigen::Index dim() const override { return A_.rows(); }
  DenseMatrix apply(const DenseMatrix& X) const override {
    return s_.asDiagonal() * (A_ * (s_.asDiagonal() * X));
  }
  DenseMatrix inv_apply(const DenseMatrix& X) const override {
    return s_.cwiseInverse().asDiagonal() * lu_.solve(s_.cwiseInverse().asDiagonal() * X);
  }

 private:
  SparseMatrix A_;
  Factorization lu_;
  Eigen::VectorXd s_;  // E^{-1/2} diagonal
};

class CholTransformOperator final : public StableOperator {
 public:
  CholTransformOperator(SparseMatrix A, SparseMatrix L)
      : A_(std::move(A)), lu_(A_), L_(std::move(L)) {}

  Eigen::Index dim() const override { return A_.rows(); }
  DenseMatrix apply(const DenseMatrix& X) const override {
    DenseMatrix U = L_.transpose().triangularView<Eigen::Upper>().solve(X);
    DenseMatrix W = A_ * U;
    return L_.triangularView<Eigen::Lower>().solve(W);
  }
  DenseMatrix inv_apply(const DenseMatrix& X) const override {
    DenseMatrix W = lu_.solve(DenseMatrix(L_ * X));
    return L_.transpose() * W;
  }
  DenseMatrix back_map(const DenseMatrix& Zt) const {
    return L_.transpose().triangularView<Eigen::Upper>().solve(Zt);
  }
  DenseMatrix forward(const DenseMatrix& X) const {
    return L_.triangularView<Eigen::Lower>().solve(X);
  }

 private:
  SparseMatrix A_;
  Factorization lu_;
  SparseMatrix L_;
};

}  // namespace

TransformedProblem transform_diag_e(const SparseMatrix& A, const Eigen::VectorXd& e_diag,
                                    const DenseMatrix& B) {
  if ((e_diag.array() <= 0.0).any()) throw NotSPD("diagonal mass matrix has a nonpositive entry");
  Eigen::VectorXd s = e_diag.cwiseSqrt().cwiseInverse();
  TransformedProblem out;
  out.op = std::make_shared<DiagTransformOperator>(A, s);
  out.B = s.asDiagonal() * B;
  out.back_map = [s](const DenseMatrix& Zt) { return DenseMatrix(s.asDiagonal() * Zt); };
  return out;
}

TransformedProblem transform_chol_e(const SparseMatrix& A, const SparseMatrix& E,
                                    const DenseMatrix& B) {
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> llt(E);
  if (llt.info() != Eigen::Success) throw NotSPD("Cholesky factorization of E failed");
  SparseMatrix L = llt.matrixL();
  auto op = std::make_shared<CholTransformOperator>(A, L);
  TransformedProblem out;
  out.op = op;
  out.B = op->forward(B);
  out.back_map = [op](const DenseMatrix& Zt) { return op->back_map(Zt); };
  return out;
}

DenseMatrix kron_lyap_solve(const DenseMatrix& A, const DenseMatrix& B) {
  const Eigen::Index n = A.rows();
  Eigen::EigenSolver<DenseMatrix> es(A, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw EigFailure("eigendecomposition failed");
  ComplexDenseMatrix P = es.eigenvectors();
  Eigen::VectorXcd lam = es.eigenvalues();
  ComplexDenseMatrix Pinv = P.inverse();
  ComplexDenseMatrix C = Pinv * (B * B.transpose()).cast<Complex>() * Pinv.transpose();
  const double lam_scale = lam.cwiseAbs().maxCoeff();
  ComplexDenseMatrix Xh(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex d = lam(i) + lam(j);
      if (std::abs(d) <= 1e-14 * std::max(1.0, lam_scale)) {
        throw SingularMatrix("Lyapunov operator singular: opposite eigenvalues");
      }
      Xh(i, j) = -C(i, j) / d;
    }
  }
  DenseMatrix X = (P * Xh * P.transpose()).real();
  return 0.5 * (X + X.transpose());
}

double dense_lyap_residual(const DenseMatrix& A, const DenseMatrix& X, const DenseMatrix& B) {
  DenseMatrix R = A * X + X * A.transpose() + B * B.transpose();
  return R.norm() / (B.transpose() * B).norm();
}

KpikResult kpik_solve(const StableOperator& op, const DenseMatrix& B, double eps_out, int m_max) {
  const auto t0 = std::chrono::steady_clock::now();
  KpikResult out;
  out.report.method = "kpik";
  ExtendedKrylovBasis basis(op, B);
  const double nu = (B.transpose() * B).norm();
  const int q = basis.block_width();

  DenseMatrix L;
  int mb = 0;
  bool converged = false;
  while (basis.blocks() <= m_max) {
    if (!basis.at_full_space()) basis.expand();
    mb = basis.max_proj_blocks();
    const Eigen::Index k = 2 * static_cast<Eigen::Index>(q) * mb;
    DenseMatrix rhs = DenseMatrix::Zero(k, q);
    rhs.topRows(2 * q) = basis.gamma();
    L = kron_lyap_solve(basis.Tm(mb), rhs);
    const double resnorm = std::sqrt(2.0) * (basis.tail(mb) * L).norm();
    const double rel = resnorm / nu;
    out.report.history.push_back(
        IterRecord{mb, mb, static_cast<int>(k), resnorm, rel, Complex(0, 0), 0.0});
    if (rel < eps_out) {
      converged = true;
      break;
    }
    if (basis.at_full_space()) break;
  }

  out.report.status = converged ? SolveStatus::Converged : SolveStatus::MaxSpaceReached;
  out.report.iterations = mb;
  out.report.space_dim = 2 * q * mb;
  out.report.final_resnorm_rel = out.report.history.empty()
                                     ? 0.0
                                     : out.report.history.back().resnorm_rel;

  // Z from the truncated symmetric eigendecomposition of the projected
  // solution.
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (L + L.transpose()));
  const Eigen::VectorXd& d = es.eigenvalues();
  const double dmax = d.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) > 1e-12 * dmax) keep.push_back(i);
  }
  DenseMatrix F(L.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    F.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]) * std::sqrt(d(keep[i]));
  }
  out.Z = basis.Vm(mb) * F;
  out.report.factor_cols = static_cast<int>(out.Z.cols());
  out.report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace lyapkit
