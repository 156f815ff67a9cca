#include "lyapkit/kadi.hpp"

#include <chrono>
#include <cmath>

namespace lyapkit {

namespace {

DenseMatrix pad_rows(const DenseMatrix& X, Eigen::Index rows) {
  DenseMatrix out = DenseMatrix::Zero(rows, X.cols());
  out.topRows(X.rows()) = X;
  return out;
}

}  // namespace

KadiState::KadiState(const StableOperator& op, const DenseMatrix& B)
    : basis_(op, B), ups_(basis_.gamma()), nu_((B.transpose() * B).norm()) {}

void KadiState::inner_accept_real(double p, const ComplexDenseMatrix& Y) {
  DenseMatrix Yr = Y.real();
  const int m_j = static_cast<int>(Y.rows() / (2 * basis_.block_width()));
  ups_ = pad_rows(ups_, Y.rows()) - 2.0 * p * Yr;
  stack_.push_back(KadiStackEntry{m_j, std::move(Yr)});
  shifts_.push_back(Complex(p, 0.0));
  ++j_;
}

void KadiState::inner_accept_complex_pair(Complex p, const ComplexDenseMatrix& Y) {
  const double beta = p.real() / p.imag();
  const int m_j = static_cast<int>(Y.rows() / (2 * basis_.block_width()));
  DenseMatrix Yre = Y.real(), Yim = Y.imag();
  DenseMatrix C = Yre + beta * Yim;
  ups_ = pad_rows(ups_, Y.rows()) - 4.0 * p.real() * C;
  stack_.push_back(KadiStackEntry{m_j, std::sqrt(2.0) * C});
  stack_.push_back(KadiStackEntry{m_j, std::sqrt(2.0 * (beta * beta + 1.0)) * Yim});
  shifts_.push_back(p);
  shifts_.push_back(std::conj(p));
  j_ += 2;
}

DenseMatrix KadiState::assemble_Z() const {
  if (stack_.empty()) throw std::logic_error("assemble_Z: no accepted shifts");
  const int q = static_cast<int>(basis_.block_width());
  const int m_last = stack_.back().m_blocks;
  const Eigen::Index k = 2 * static_cast<Eigen::Index>(q) * m_last;
  DenseMatrix Ymat = DenseMatrix::Zero(k, static_cast<Eigen::Index>(q) * stack_.size());
  for (size_t i = 0; i < stack_.size(); ++i) {
    const double scale = std::sqrt(-2.0 * shifts_[i].real());
    Ymat.block(0, static_cast<Eigen::Index>(q) * i, stack_[i].Y.rows(), q) = scale * stack_[i].Y;
  }
  return basis_.Vm(m_last) * Ymat;
}

TryShiftResult try_next_shift_without_expand(const KadiState& state, Complex p_next,
                                             double eps_inn, InnerVariant variant) {
  const int mb = state.basis().max_proj_blocks();
  ProjectedSolve ps = projected_solve(state.basis(), mb, p_next, state.ups(), variant);
  return TryShiftResult{ps.resnorm <= eps_inn, std::move(ps.Y), ps.resnorm};
}

KadiResult kadi_run(const StableOperator& op, const DenseMatrix& B, ShiftStrategy& strategy,
                    InnerVariant variant, double eps_out, const InnerTolSchedule& sched,
                    int m_max, int j_max, KadiTrace* trace) {
  const auto t0 = std::chrono::steady_clock::now();
  KadiResult out;
  out.report.method = variant == InnerVariant::Galerkin ? "kadi-g" : "kadi-mr";

  KadiState state(op, B);
  const double nu = state.nu();

  auto finish = [&](SolveStatus status) {
    out.report.status = status;
    out.report.iterations = state.j();
    out.report.space_dim = state.stack().empty()
                               ? static_cast<int>(state.basis().dim())
                               : 2 * state.basis().block_width() * state.stack().back().m_blocks;
    out.Z = state.stack().empty() ? DenseMatrix(op.dim(), 0) : state.assemble_Z();
    out.report.factor_cols = static_cast<int>(out.Z.cols());
    out.report.final_resnorm_rel = state.lyap_resnorm() / nu;
    out.shifts = state.shifts();
    if (trace) trace->V_final = state.basis().V();
    out.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  };

  auto record = [&](Complex p, double eps_inn) {
    const int m_j = state.stack().back().m_blocks;
    IterRecord rec{state.j(), m_j, 2 * state.basis().block_width() * m_j, state.lyap_resnorm(),
                   state.lyap_resnorm() / nu, p, eps_inn};
    out.report.history.push_back(rec);
  };

  // B (numerically) zero: the outer test is already met, return empty factor.
  if (state.lyap_resnorm() <= nu * eps_out || j_max <= 0) {
    return finish(SolveStatus::Converged);
  }

  ShiftProposal prop = strategy.next(ShiftContext{state.basis().Tm(1), state.basis().gamma()});
  double eps_inn = sched.tol(1, state.lyap_resnorm(), nu, eps_out);

  while (state.basis().blocks() <= m_max && state.j() < j_max) {
    if (state.basis().at_full_space()) {
      // The tail vanishes; the projected solve is exact and must be accepted.
    } else {
      state.basis().expand();
    }
    TryShiftResult ts = try_next_shift_without_expand(state, prop.p, eps_inn, variant);
    bool at_full = state.basis().at_full_space();
    while (ts.accept || at_full) {
      if (prop.p.real() >= 0.0) throw NoStableShift("proposed shift not in the left half plane");
      if (trace) {
        trace->steps.push_back(
            KadiTraceEntry{prop.p, prop.is_pair, state.basis().max_proj_blocks(), ts.Y});
      }
      if (prop.is_pair) {
        state.inner_accept_complex_pair(prop.p, ts.Y);
        record(prop.p, eps_inn);
        out.report.history.back().j = state.j() - 1;
        record(std::conj(prop.p), eps_inn);
      } else {
        state.inner_accept_real(prop.p.real(), ts.Y);
        record(prop.p, eps_inn);
      }
      if (state.lyap_resnorm() <= nu * eps_out) return finish(SolveStatus::Converged);
      if (state.j() >= j_max) return finish(SolveStatus::MaxIterReached);

      const int m_j = state.stack().back().m_blocks;
      prop = strategy.next(ShiftContext{state.basis().Tm(m_j), state.ups()});
      eps_inn = sched.tol(state.j() + 1, state.lyap_resnorm(), nu, eps_out);
      ts = try_next_shift_without_expand(state, prop.p, eps_inn, variant);
      if (at_full && !ts.accept) {
        // Full space: no expansion possible, the exact solve is as good as it
        // gets.  Accept regardless of eps_inn.
        ts.accept = true;
      }
    }
  }

  return finish(state.basis().blocks() > m_max ? SolveStatus::MaxSpaceReached
                                               : SolveStatus::MaxIterReached);
}

}  // namespace lyapkit
