#pragma once

#include <memory>

#include "lyapkit/report.hpp"
#include "lyapkit/shifts.hpp"

namespace lyapkit {

// Explicit low-rank ADI state.  Z and W stay exactly real, also across
// complex-conjugate shift pairs.
struct AdiState {
  DenseMatrix Z;  // n x jq accumulated factor
  DenseMatrix W;  // n x q residual factor
  int j = 0;      // shift applications consumed
  double nu = 0.0;  // ||B^T B||_F

  double resnorm_abs() const { return (W.transpose() * W).norm(); }
  double resnorm_rel() const { return resnorm_abs() / nu; }
};

AdiState adi_init(const DenseMatrix& B);

// One real-shift step: solves (A + pI) S = W, appends sqrt(-2p) S to Z and
// sets W <- W - 2p S.
void adi_step_real(AdiState& state, ShiftedSolver& solver, double p);

// One complex-conjugate-pair step (advances j by 2) in real arithmetic, per
// the standard realified LR-ADI update.
void adi_step_complex_pair(AdiState& state, ShiftedSolver& solver, Complex p);

// Produces the next ADI shift given the current residual factor.
class ShiftSource {
 public:
  virtual ~ShiftSource() = default;
  virtual ShiftProposal next(const DenseMatrix& W) = 0;
};

// Replays a recorded shift sequence (conjugate pairs collapsed), cycling when
// exhausted.
class ReplayShiftSource final : public ShiftSource {
 public:
  explicit ReplayShiftSource(const std::vector<Complex>& consumed_shifts);
  ShiftProposal next(const DenseMatrix& W) override;

 private:
  std::vector<ShiftProposal> proposals_;
  size_t cursor_ = 0;
};

// Backs an online strategy with a fixed-depth extended Krylov basis of A:
// the strategy context is (V^T A V, V^T W).
class ProjectedShiftSource final : public ShiftSource {
 public:
  ProjectedShiftSource(const SparseMatrix& A, const DenseMatrix& B,
                       std::unique_ptr<ShiftStrategy> strategy, int depth_blocks = 10);
  ShiftProposal next(const DenseMatrix& W) override;

 private:
  SparseOperator op_;
  std::unique_ptr<ExtendedKrylovBasis> basis_;
  std::unique_ptr<ShiftStrategy> strategy_;
};

struct AdiResult {
  DenseMatrix Z;
  std::vector<Complex> shifts;  // consumed shifts, closed under conjugation
  SolveReport report;
};

// Classic LR-ADI (the reference baseline): per-shift shifted sparse solves
// with factorization caching, stopping at ||W^T W||_F < eps ||B^T B||_F.
AdiResult adi_run(const SparseMatrix& A, const DenseMatrix& B, ShiftSource& shifts, double eps,
                  int j_max);

}  // namespace lyapkit
