#pragma once

#include <functional>
#include <memory>
#include <string>

#include "lyapkit/report.hpp"
#include "lyapkit/xkrylov.hpp"

namespace lyapkit {

struct GeneratedProblem {
  SparseMatrix A;
  DenseMatrix B;
  std::string name;
  int h = 0;
  double zeta = 0.0;
  int q = 0;
  unsigned seed = 0;
  bool symmetric = false;
};

enum class RhsKind { Ones, Random };

// 2-D Laplacian on an h x h grid: A = I (x) D + D (x) I with
// D = tridiag(1, -2, 1); B has unit Frobenius norm.
GeneratedProblem gen_laplacian2d(int h, int q, RhsKind b_kind = RhsKind::Ones,
                                 unsigned seed = 0);

// 3-D convection-diffusion operator on the unit cube, h nodes per direction,
// centered differences, diffusion zeta:
//   M = (D + Pi3 N^T) (x) I (x) I + I (x) D (x) I + I (x) I (x) D
//       + Pi1 (x) Psi1 (x) Phi1 N,
// D = zeta (h-1)^2 tridiag(-1, 2, -1), N = -(h-1)/2 tridiag(-1, 0, 1),
// convection (( 1-x^2) y z, 0, e^z).  A = -M so the spectrum is stable.
// with_convection=false drops the convective terms, leaving the scaled
// (symmetric) 3-D Laplacian.
GeneratedProblem gen_convdiff3d(int h, double zeta, unsigned seed = 0, int q = 1,
                                bool with_convection = true);

struct TransformedProblem {
  std::shared_ptr<StableOperator> op;
  DenseMatrix B;
  std::function<DenseMatrix(const DenseMatrix&)> back_map;
};

// Diagonal SPD mass matrix: operator E^{-1/2} A E^{-1/2}, rhs E^{-1/2} B,
// back map Z~ -> E^{-1/2} Z~.
TransformedProblem transform_diag_e(const SparseMatrix& A, const Eigen::VectorXd& e_diag,
                                    const DenseMatrix& B);

// Sparse SPD mass matrix E = L L^T: operator L^{-1} A L^{-T} applied
// implicitly through triangular solves, back map Z~ -> L^{-T} Z~.
TransformedProblem transform_chol_e(const SparseMatrix& A, const SparseMatrix& E,
                                    const DenseMatrix& B);

// Dense small-scale oracle: the exact solution of A X + X A^T + B B^T = 0,
// symmetrized.  Throws SingularMatrix when the spectrum of A is not stable
// enough for the equation to be solvable (lambda_i + lambda_j = 0).
DenseMatrix kron_lyap_solve(const DenseMatrix& A, const DenseMatrix& B);

// Dense relative Lyapunov residual ||A X + X A^T + B B^T||_F / ||B^T B||_F.
double dense_lyap_residual(const DenseMatrix& A, const DenseMatrix& X, const DenseMatrix& B);

struct KpikResult {
  DenseMatrix Z;
  SolveReport report;
};

// K-PIK baseline: Galerkin projection of the Lyapunov equation onto the same
// extended Krylov space, projected equations solved by the dense oracle,
// factor from a truncated symmetric eigendecomposition.
KpikResult kpik_solve(const StableOperator& op, const DenseMatrix& B, double eps_out, int m_max);

}  // namespace lyapkit
