#pragma once

#include <vector>

#include "lyapkit/linops.hpp"

namespace lyapkit {

// Block extended Krylov subspace EK_m(A, B) = span{B, A^{-1}B, AB, A^{-2}B, ...}
// grown incrementally, 2q orthonormal columns per block.  Alongside the basis
// V the class maintains the projected matrix T = V^T A V for all built blocks,
// so that for any mb < blocks() the Arnoldi relation
//     A V_mb = V_mb T_mb + V_next * tail(mb)
// holds with V_next the block mb+1 and tail(mb) the corresponding sub-block
// of T.
class ExtendedKrylovBasis {
 public:
  // Builds the first block from the economy QR of [B, A^{-1}B].  Throws
  // BreakdownError if that block is rank deficient (no deflation).
  ExtendedKrylovBasis(const StableOperator& op, const DenseMatrix& B);

  // Appends one block: A applied to the forward q columns of the last block,
  // A^{-1} to its backward q columns, orthogonalized by CGS2 against all
  // previous blocks.  A rank-deficient new block means the space is invariant;
  // the basis then stops growing and reports at_full_space().
  void expand();

  int block_width() const { return q_; }
  int blocks() const { return m_; }
  Eigen::Index dim() const { return 2 * static_cast<Eigen::Index>(q_) * m_; }
  Eigen::Index n() const { return op_->dim(); }
  bool at_full_space() const { return invariant_ || dim() >= n(); }

  // Largest block count usable as projection dimension: the Arnoldi tail needs
  // the next block, except at full space where the tail vanishes.
  int max_proj_blocks() const { return at_full_space() ? m_ : m_ - 1; }

  const DenseMatrix& V() const { return V_; }
  const DenseMatrix& T() const { return T_; }
  const DenseMatrix& gamma() const { return gamma_; }  // 2q x q, B = V_1 * gamma

  // Leading 2q*mb columns/principal submatrix, 1 <= mb <= blocks().
  DenseMatrix Vm(int mb) const { return V_.leftCols(cols(mb)); }
  DenseMatrix Tm(int mb) const { return T_.topLeftCorner(cols(mb), cols(mb)); }

  // E_{mb+1}^T underline-T_mb: coupling of block mb+1 against the first mb
  // blocks; zero at full space.
  DenseMatrix tail(int mb) const;

  const StableOperator& op() const { return *op_; }

 private:
  Eigen::Index cols(int mb) const { return 2 * static_cast<Eigen::Index>(q_) * mb; }

  const StableOperator* op_;
  int q_ = 0;
  int m_ = 0;
  bool invariant_ = false;  // expansion hit an invariant subspace
  DenseMatrix V_;      // n x 2qm
  DenseMatrix AV_;     // A applied to every basis column
  DenseMatrix T_;      // V^T A V
  DenseMatrix gamma_;  // 2q x q
};

// Eigenvalues of T_mb (Ritz values of A with respect to the space).
std::vector<Complex> ritz_values(const ExtendedKrylovBasis& basis, int mb);

inline std::vector<Complex> ritz_values(const ExtendedKrylovBasis& basis) {
  return ritz_values(basis, basis.blocks());
}

}  // namespace lyapkit
