#pragma once

#include <vector>

#include "lyapkit/report.hpp"
#include "lyapkit/xkrylov.hpp"

namespace lyapkit {

enum class InnerVariant { Galerkin, MinRes };

struct ProjectedSolve {
  ComplexDenseMatrix Y;  // 2q*mb x q
  double resnorm = 0.0;  // ||R||_F via the cheap tail/kernel formula
};

// Galerkin projected solve (T_mb + pI) Y = [rhs; 0] with cheap residual
// ||tail * Y||_F.  rhs_coeffs has 2q*m0 rows, m0 <= mb, and is zero padded.
ProjectedSolve galerkin_coeffs(const ExtendedKrylovBasis& basis, int mb, Complex p,
                               const DenseMatrix& rhs_coeffs);

// Minimal-residual projected solve: Y minimizes
// ||(underline-T_mb + p [I; 0]) Y - [rhs; 0]||_F, residual ||Q2^T [rhs; 0]||_F.
ProjectedSolve mr_coeffs(const ExtendedKrylovBasis& basis, int mb, Complex p,
                         const DenseMatrix& rhs_coeffs);

inline ProjectedSolve projected_solve(const ExtendedKrylovBasis& basis, int mb, Complex p,
                                      const DenseMatrix& rhs_coeffs, InnerVariant variant) {
  return variant == InnerVariant::Galerkin ? galerkin_coeffs(basis, mb, p, rhs_coeffs)
                                           : mr_coeffs(basis, mb, p, rhs_coeffs);
}

struct ShiftSystemResult {
  Complex shift{0.0, 0.0};
  ComplexDenseMatrix S;   // n x q, V * Y
  double resnorm = 0.0;   // absolute residual norm at exit
  bool converged = false;
};

struct FamilyResult {
  std::vector<ShiftSystemResult> systems;
  int space_dim = 0;
  SolveStatus status = SolveStatus::Converged;
};

// Solves the family (A + p_j I) S_j = W over one shared extended Krylov
// basis, expanding until every system has relative residual below eps or the
// space dimension would exceed max_space.  Converged systems stop being
// re-solved.
FamilyResult solve_family(const StableOperator& op, const DenseMatrix& W,
                          const std::vector<Complex>& shifts, double eps, int max_space,
                          InnerVariant variant = InnerVariant::Galerkin);

}  // namespace lyapkit
