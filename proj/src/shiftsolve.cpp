#include "lyapkit/shiftsolve.hpp"

namespace lyapkit {

namespace {

ComplexDenseMatrix pad_rhs(const DenseMatrix& rhs, Eigen::Index k) {
  if (rhs.rows() > k) throw std::invalid_argument("rhs coefficient block taller than space");
  ComplexDenseMatrix out = ComplexDenseMatrix::Zero(k, rhs.cols());
  out.topRows(rhs.rows()) = rhs.cast<Complex>();
  return out;
}

}  // namespace

ProjectedSolve galerkin_coeffs(const ExtendedKrylovBasis& basis, int mb, Complex p,
                               const DenseMatrix& rhs_coeffs) {
  const Eigen::Index k = 2 * basis.block_width() * static_cast<Eigen::Index>(mb);
  ComplexDenseMatrix M = basis.Tm(mb).cast<Complex>();
  M.diagonal().array() += p;
  ProjectedSolve out;
  out.Y = dense_solve_cx(M, pad_rhs(rhs_coeffs, k));
  out.resnorm = (basis.tail(mb).cast<Complex>() * out.Y).norm();
  return out;
}

ProjectedSolve mr_coeffs(const ExtendedKrylovBasis& basis, int mb, Complex p,
                         const DenseMatrix& rhs_coeffs) {
  const int tq = 2 * basis.block_width();
  const Eigen::Index k = static_cast<Eigen::Index>(tq) * mb;
  DenseMatrix tail = basis.tail(mb);
  if (tail.isZero(0.0)) {
    // Full space: the least squares problem is square and minimal residual
    // coincides with Galerkin.
    return galerkin_coeffs(basis, mb, p, rhs_coeffs);
  }
  ComplexDenseMatrix M(k + tq, k);
  M.topRows(k) = basis.Tm(mb).cast<Complex>();
  M.topRows(k).diagonal().array() += p;
  M.bottomRows(tq) = tail.cast<Complex>();
  ComplexDenseMatrix rhs = pad_rhs(rhs_coeffs, k + tq);
  LstsqResult ls = dense_lstsq_cx(M, rhs);
  ProjectedSolve out;
  out.Y = std::move(ls.Y);
  out.resnorm = (ls.Q2.adjoint() * rhs).norm();
  return out;
}

FamilyResult solve_family(const StableOperator& op, const DenseMatrix& W,
                          const std::vector<Complex>& shifts, double eps, int max_space,
                          InnerVariant variant) {
  for (Complex p : shifts) {
    if (p.real() >= 0.0) throw std::invalid_argument("solve_family: shifts must have Re(p) < 0");
  }
  FamilyResult out;
  out.systems.resize(shifts.size());
  for (size_t j = 0; j < shifts.size(); ++j) out.systems[j].shift = shifts[j];

  ExtendedKrylovBasis basis(op, W);
  out.space_dim = static_cast<int>(basis.dim());
  if (shifts.empty()) return out;

  const double beta = W.norm();
  // W = V_1 * gamma, so the rhs coefficient block is E_1 gamma.
  DenseMatrix rhs = basis.gamma();

  size_t n_pending = shifts.size();
  while (true) {
    if (!basis.at_full_space()) basis.expand();
    const int mb = basis.max_proj_blocks();
    out.space_dim = static_cast<int>(2 * basis.block_width() * mb);
    for (size_t j = 0; j < shifts.size(); ++j) {
      ShiftSystemResult& sys = out.systems[j];
      if (sys.converged) continue;
      ProjectedSolve ps = projected_solve(basis, mb, shifts[j], rhs, variant);
      sys.resnorm = ps.resnorm;
      sys.S = basis.Vm(mb).cast<Complex>() * ps.Y;
      if (ps.resnorm / beta < eps) {
        sys.converged = true;
        --n_pending;
      }
    }
    if (n_pending == 0) break;
    if (basis.at_full_space() || static_cast<int>(basis.dim() + 2 * basis.block_width()) > max_space) {
      out.status = SolveStatus::MaxSpaceReached;
      break;
    }
  }
  return out;
}

}  // namespace lyapkit
