#include "lyapkit/xkrylov.hpp"

namespace lyapkit {

ExtendedKrylovBasis::ExtendedKrylovBasis(const StableOperator& op, const DenseMatrix& B)
    : op_(&op), q_(static_cast<int>(B.cols())) {
  const Eigen::Index n = op.dim();
  if (B.rows() != n) throw std::invalid_argument("basis init: B has wrong row count");
  if (2 * B.cols() > n) throw std::invalid_argument("basis init: need 2q <= n");

  DenseMatrix block(n, 2 * q_);
  block.leftCols(q_) = B;
  block.rightCols(q_) = op.inv_apply(B);
  EconomyQR qr = economy_qr(block);
  if (qr.rank_deficient) {
    throw BreakdownError("initial block [B, A^{-1}B] is rank deficient");
  }
  V_ = qr.Q;
  gamma_ = qr.R.leftCols(q_);
  AV_ = op.apply(V_);
  T_ = V_.transpose() * AV_;
  m_ = 1;
}

void ExtendedKrylovBasis::expand() {
  const Eigen::Index n = op_->dim();
  if (invariant_) return;
  if (cols(m_ + 1) > n) {
    throw BreakdownError("cannot expand basis beyond the full space");
  }
  const Eigen::Index k = cols(m_);
  DenseMatrix last = V_.rightCols(2 * q_);
  DenseMatrix cand(n, 2 * q_);
  cand.leftCols(q_) = op_->apply(last.leftCols(q_));
  cand.rightCols(q_) = op_->inv_apply(last.rightCols(q_));

  // CGS2 against all previous blocks, then economy QR of the residual block.
  for (int pass = 0; pass < 2; ++pass) {
    cand -= V_ * (V_.transpose() * cand);
  }
  EconomyQR qr = economy_qr(cand);
  if (qr.rank_deficient) {
    // The candidate block lies (numerically) inside the current space, so the
    // space is invariant: stop growing and treat the Arnoldi tail as zero.
    invariant_ = true;
    return;
  }

  V_.conservativeResize(Eigen::NoChange, k + 2 * q_);
  V_.rightCols(2 * q_) = qr.Q;
  DenseMatrix Anew = op_->apply(qr.Q);
  AV_.conservativeResize(Eigen::NoChange, k + 2 * q_);
  AV_.rightCols(2 * q_) = Anew;

  DenseMatrix Tnew(k + 2 * q_, k + 2 * q_);
  Tnew.topLeftCorner(k, k) = T_;
  Tnew.topRightCorner(k, 2 * q_) = V_.leftCols(k).transpose() * Anew;
  Tnew.bottomLeftCorner(2 * q_, k) = qr.Q.transpose() * AV_.leftCols(k);
  Tnew.bottomRightCorner(2 * q_, 2 * q_) = qr.Q.transpose() * Anew;
  T_ = std::move(Tnew);
  ++m_;
}

DenseMatrix ExtendedKrylovBasis::tail(int mb) const {
  if (mb < 1 || mb > max_proj_blocks()) {
    throw std::invalid_argument("tail: projection block count out of range");
  }
  if (mb == m_) return DenseMatrix::Zero(2 * q_, cols(mb));  // full space
  return T_.block(cols(mb), 0, 2 * q_, cols(mb));
}

std::vector<Complex> ritz_values(const ExtendedKrylovBasis& basis, int mb) {
  std::vector<EigPair> pairs = dense_eig(basis.Tm(mb));
  std::vector<Complex> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.value);
  return out;
}

}  // namespace lyapkit
