#include "lyapkit/adi.hpp"

#include <chrono>
#include <cmath>

namespace lyapkit {

AdiState adi_init(const DenseMatrix& B) {
  AdiState st;
  st.W = B;
  st.Z = DenseMatrix(B.rows(), 0);
  st.j = 0;
  st.nu = (B.transpose() * B).norm();
  return st;
}

void adi_step_real(AdiState& state, ShiftedSolver& solver, double p) {
  if (p >= 0.0) throw std::invalid_argument("adi_step_real: need p < 0");
  DenseMatrix S = solver.solve_real(p, state.W);
  state.W -= 2.0 * p * S;
  const Eigen::Index q = state.W.cols();
  state.Z.conservativeResize(Eigen::NoChange, state.Z.cols() + q);
  state.Z.rightCols(q) = std::sqrt(-2.0 * p) * S;
  ++state.j;
}

void adi_step_complex_pair(AdiState& state, ShiftedSolver& solver, Complex p) {
  if (p.real() >= 0.0 || p.imag() == 0.0) {
    throw std::invalid_argument("adi_step_complex_pair: need Re(p) < 0, Im(p) != 0");
  }
  ComplexDenseMatrix S = solver.solve_complex(p, state.W);
  const double beta = p.real() / p.imag();
  DenseMatrix Sre = S.real(), Sim = S.imag();
  DenseMatrix C = Sre + beta * Sim;
  state.W -= 4.0 * p.real() * C;
  const Eigen::Index q = state.W.cols();
  const double scale = std::sqrt(-2.0 * p.real());
  state.Z.conservativeResize(Eigen::NoChange, state.Z.cols() + 2 * q);
  state.Z.middleCols(state.Z.cols() - 2 * q, q) = scale * std::sqrt(2.0) * C;
  state.Z.rightCols(q) = scale * std::sqrt(2.0 * (beta * beta + 1.0)) * Sim;
  state.j += 2;
}

ReplayShiftSource::ReplayShiftSource(const std::vector<Complex>& consumed_shifts)
    : proposals_(collapse_conjugate_pairs(consumed_shifts)) {}

ShiftProposal ReplayShiftSource::next(const DenseMatrix&) {
  ShiftProposal out = proposals_[cursor_ % proposals_.size()];
  ++cursor_;
  return out;
}

ProjectedShiftSource::ProjectedShiftSource(const SparseMatrix& A, const DenseMatrix& B,
                                           std::unique_ptr<ShiftStrategy> strategy,
                                           int depth_blocks)
    : op_(A), strategy_(std::move(strategy)) {
  basis_ = std::make_unique<ExtendedKrylovBasis>(op_, B);
  const int limit = static_cast<int>(op_.dim() / (2 * B.cols()));
  const int depth = std::min(depth_blocks, limit);
  while (basis_->blocks() < depth && !basis_->at_full_space()) basis_->expand();
}

ShiftProposal ProjectedShiftSource::next(const DenseMatrix& W) {
  ShiftContext ctx{basis_->T(), basis_->V().transpose() * W};
  return strategy_->next(ctx);
}

AdiResult adi_run(const SparseMatrix& A, const DenseMatrix& B, ShiftSource& shifts, double eps,
                  int j_max) {
  const auto t0 = std::chrono::steady_clock::now();
  AdiResult out;
  out.report.method = "lradi";
  ShiftedSolver solver(A);
  AdiState st = adi_init(B);

  while (st.resnorm_abs() >= eps * st.nu && st.j < j_max) {
    ShiftProposal prop = shifts.next(st.W);
    if (prop.p.real() >= 0.0) throw NoStableShift("proposed shift not in the left half plane");
    if (prop.is_pair) {
      adi_step_complex_pair(st, solver, prop.p);
      out.shifts.push_back(prop.p);
      out.shifts.push_back(std::conj(prop.p));
      // Both pair rows carry the post-pair residual; no intermediate complex
      // residual is recorded.
      IterRecord rec{st.j - 1, 0, 0, st.resnorm_abs(), st.resnorm_rel(), prop.p, 0.0};
      out.report.history.push_back(rec);
      rec.j = st.j;
      rec.shift = std::conj(prop.p);
      out.report.history.push_back(rec);
    } else {
      adi_step_real(st, solver, prop.p.real());
      out.shifts.push_back(prop.p);
      out.report.history.push_back(
          IterRecord{st.j, 0, 0, st.resnorm_abs(), st.resnorm_rel(), prop.p, 0.0});
    }
  }

  out.report.status =
      st.resnorm_abs() < eps * st.nu ? SolveStatus::Converged : SolveStatus::MaxIterReached;
  out.report.iterations = st.j;
  out.report.factor_cols = static_cast<int>(st.Z.cols());
  out.report.final_resnorm_rel = st.resnorm_rel();
  out.Z = std::move(st.Z);
  out.report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace lyapkit
