#pragma once

#include <memory>
#include <optional>

#include "lyapkit/shifts.hpp"
#include "lyapkit/shiftsolve.hpp"

namespace lyapkit {

// Inner-tolerance schedule for the implicit ADI: chooses eps_inn^(j) before
// the j-th shifted solve, compared against the absolute projected residual
// norm.
class InnerTolSchedule {
 public:
  virtual ~InnerTolSchedule() = default;
  // ups_gram_norm = ||Upsilon_{j-1}^T Upsilon_{j-1}||_F, nu = ||B^T B||_F.
  virtual double tol(int j, double ups_gram_norm, double nu, double eps_out) const = 0;
};

class FixedInnerTol final : public InnerTolSchedule {
 public:
  explicit FixedInnerTol(double value) : value_(value) {}
  double tol(int, double, double, double) const override { return value_; }

 private:
  double value_;
};

// Monotone relaxation: the inner tolerance loosens as the outer residual
// drops, capped at eps_max.
class RelaxedInnerTol final : public InnerTolSchedule {
 public:
  explicit RelaxedInnerTol(double eps_max = 1e-2) : eps_max_(eps_max) {}
  double tol(int, double ups_gram_norm, double nu, double eps_out) const override {
    const double floor = eps_out * nu;
    return std::min(eps_max_, floor / std::max(ups_gram_norm, floor));
  }

 private:
  double eps_max_;
};

struct KadiStackEntry {
  int m_blocks = 0;   // m_j
  DenseMatrix Y;      // realified accepted inner solution, 2q*m_j x q
};

// Implicit-ADI state: the whole LR-ADI iteration carried in projected
// coordinates over one growing extended Krylov basis.  W_j = V * [ups; 0]
// is never formed at full scale.
class KadiState {
 public:
  KadiState(const StableOperator& op, const DenseMatrix& B);

  ExtendedKrylovBasis& basis() { return basis_; }
  const ExtendedKrylovBasis& basis() const { return basis_; }
  const DenseMatrix& ups() const { return ups_; }
  const std::vector<KadiStackEntry>& stack() const { return stack_; }
  const std::vector<Complex>& shifts() const { return shifts_; }
  int j() const { return j_; }
  double nu() const { return nu_; }

  // ||Upsilon_j^T Upsilon_j||_F = ||W_j^T W_j||_F.
  double lyap_resnorm() const { return (ups_.transpose() * ups_).norm(); }

  // Accepts the inner solution for a real shift: pushes (m_j, Re Y) and sets
  // Upsilon_j = [Upsilon_{j-1}; 0] - 2p Y.
  void inner_accept_real(double p, const ComplexDenseMatrix& Y);

  // Accepts a conjugate pair (advances j by 2); both stored blocks are real.
  void inner_accept_complex_pair(Complex p, const ComplexDenseMatrix& Y);

  // Assembles Z = V [padded Y-blocks] (sqrt(-2 diag Re p) (x) I_q).
  DenseMatrix assemble_Z() const;

 private:
  ExtendedKrylovBasis basis_;
  DenseMatrix ups_;
  std::vector<KadiStackEntry> stack_;
  std::vector<Complex> shifts_;
  int j_ = 0;
  double nu_ = 0.0;
};

struct TryShiftResult {
  bool accept = false;
  ComplexDenseMatrix Y;
  double resnorm = 0.0;
};

// Solves the projected problem for p_next at the current space, without any
// basis growth; accept iff resnorm <= eps_inn.
TryShiftResult try_next_shift_without_expand(const KadiState& state, Complex p_next,
                                             double eps_inn, InnerVariant variant);

// Per-accepted-shift record kept for verification runs.
struct KadiTraceEntry {
  Complex p{0.0, 0.0};
  bool is_pair = false;
  int m_blocks = 0;
  ComplexDenseMatrix Y;  // inner solution before realification
};

struct KadiTrace {
  std::vector<KadiTraceEntry> steps;
  DenseMatrix V_final;
};

struct KadiResult {
  DenseMatrix Z;
  std::vector<Complex> shifts;
  SolveReport report;
};

// The merged LR-ADI-EKSM method: the ADI iteration executed implicitly in
// projected coordinates over one shared extended Krylov basis, with Galerkin
// or minimal-residual inner solves.  m_max bounds the basis block count.
KadiResult kadi_run(const StableOperator& op, const DenseMatrix& B, ShiftStrategy& strategy,
                    InnerVariant variant, double eps_out, const InnerTolSchedule& sched,
                    int m_max, int j_max, KadiTrace* trace = nullptr);

}  // namespace lyapkit
