#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lyapkit/xkrylov.hpp"

namespace lyapkit {

// Projected quantities the online strategies work on: T = V^T A V and the
// projected residual factor ups with W = V * ups.
struct ShiftContext {
  DenseMatrix T;    // k x k
  DenseMatrix ups;  // k x q
};

struct ShiftProposal {
  Complex p{0.0, 0.0};  // Re(p) < 0
  bool is_pair = false;  // when true the caller must consume conj(p) next
};

// Stable eigenpair of the projected residual Hamiltonian [[T', 0],[ups ups', -T]]
// whose lower eigenvector block has maximal 2-norm.  Ties (within 1e-12
// relative) broken by smaller |Im|, then by more negative Re.  If no stable
// eigenvalue exists, Ritz values are reflected into the left half plane.
ShiftProposal hamiltonian_shift(const ShiftContext& ctx);

// Approximate minimizer of f(theta, xi) = ||ups - 2 theta (T + (theta+i xi)I)^{-1} ups||_F^2
// over theta < 0, via a 2-D simplex descent started at the Hamiltonian
// proposal.  The returned objective value never exceeds the starting one.
ShiftProposal resmin_shift(const ShiftContext& ctx);

// Objective of the residual-norm-minimizing shift selection, exposed for
// verification.
double resmin_objective(const ShiftContext& ctx, double theta, double xi);

// First shift: Hamiltonian proposal on the initial one-block context with
// ups = E_1 gamma.
ShiftProposal initial_shift(const ExtendedKrylovBasis& basis);

class ShiftStrategy {
 public:
  virtual ~ShiftStrategy() = default;
  virtual ShiftProposal next(const ShiftContext& ctx) = 0;
  virtual void reset() {}
};

class HamiltonianShifts final : public ShiftStrategy {
 public:
  ShiftProposal next(const ShiftContext& ctx) override { return hamiltonian_shift(ctx); }
};

class ResMinShifts final : public ShiftStrategy {
 public:
  ShiftProposal next(const ShiftContext& ctx) override { return resmin_shift(ctx); }
};

// Cycles through the stable Ritz values of T ordered by descending |Re|,
// complex values delivered as conjugate pairs.
class RitzCycleShifts final : public ShiftStrategy {
 public:
  ShiftProposal next(const ShiftContext& ctx) override;
  void reset() override { cursor_ = 0; }

  size_t cursor() const { return cursor_; }
  void set_cursor(size_t c) { cursor_ = c; }

 private:
  size_t cursor_ = 0;
};

// Strategy registry for configuration by name: "hamiltonian" | "resmin" | "ritz".
std::unique_ptr<ShiftStrategy> make_shift_strategy(const std::string& name);

// Turns a recorded shift sequence (closed under conjugation) into proposals,
// merging each complex value with its adjacent conjugate partner.
std::vector<ShiftProposal> collapse_conjugate_pairs(const std::vector<Complex>& consumed);

// Replays a recorded sequence, ignoring the context and cycling when
// exhausted; used for shared-shift comparisons.
class ReplayShiftStrategy final : public ShiftStrategy {
 public:
  explicit ReplayShiftStrategy(const std::vector<Complex>& consumed);
  ShiftProposal next(const ShiftContext&) override;
  void reset() override { cursor_ = 0; }

 private:
  std::vector<ShiftProposal> proposals_;
  size_t cursor_ = 0;
};

}  // namespace lyapkit
