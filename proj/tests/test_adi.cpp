#include <doctest.h>

#include "helpers.hpp"
#include "lyapkit/adi.hpp"
#include "lyapkit/testlab.hpp"

using namespace lyapkit;
using namespace lyapkit::testing;

TEST_SUITE_BEGIN("adi");

namespace {

// Reference: one textbook complex-arithmetic ADI step.
void naive_step(const SparseMatrix& A, Complex p, ComplexDenseMatrix& W,
                ComplexDenseMatrix& Z) {
  ComplexDenseMatrix S = shifted_solve(A, p, W.real());
  if (W.imag().norm() > 0) {
    S += Complex(0, 1) * shifted_solve(A, p, W.imag());
  }
  W -= 2.0 * p.real() * S;
  Z.conservativeResize(Eigen::NoChange, Z.cols() + W.cols());
  Z.rightCols(W.cols()) = std::sqrt(Complex(-2.0 * p.real())) * S;
}

}  // namespace

TEST_CASE("scalar problem converges in one step") {
  SparseMatrix A(1, 1);
  A.insert(0, 0) = -1.0;
  DenseMatrix B(1, 1);
  B << 1.0;
  AdiState st = adi_init(B);
  ShiftedSolver solver(A);
  adi_step_real(st, solver, -1.0);
  CHECK(st.W.norm() <= 1e-14);
  CHECK((st.Z * st.Z.transpose())(0, 0) == doctest::Approx(0.5));  // exact X
}

TEST_CASE("diagonal arithmetic of one real step") {
  SparseMatrix A = to_sparse((DenseMatrix(2, 2) << -1, 0, 0, -2).finished());
  DenseMatrix B(2, 1);
  B << 1, 1;
  AdiState st = adi_init(B);
  ShiftedSolver solver(A);
  adi_step_real(st, solver, -1.0);
  CHECK(st.W(0, 0) == doctest::Approx(0.0));
  CHECK(st.W(1, 0) == doctest::Approx(1.0 / 3.0));
  // S = [-0.5; -1/3], Z = sqrt(2) * S
  CHECK(st.Z(0, 0) == doctest::Approx(-0.5 * std::sqrt(2.0)));
  CHECK(st.Z(1, 0) == doctest::Approx(-std::sqrt(2.0) / 3.0));
}

TEST_CASE("dense Lyapunov residual equals ||W^T W||_F along the run") {
  GeneratedProblem p = gen_laplacian2d(20, 1, RhsKind::Random, 12);
  AdiState st = adi_init(p.B);
  ShiftedSolver solver(p.A);
  DenseMatrix Ad(p.A);
  for (double shift : {-7.9, -0.2, -2.0, -4.5}) {
    adi_step_real(st, solver, shift);
    DenseMatrix X = st.Z * st.Z.transpose();
    double dense = (Ad * X + X * Ad.transpose() + p.B * p.B.transpose()).norm();
    CHECK(std::abs(dense - st.resnorm_abs()) <= 1e-8 * std::max(dense, 1e-30));
  }
}

TEST_CASE("complex pair step matches the naive two-step oracle") {
  SparseMatrix A = to_sparse((DenseMatrix(2, 2) << 0, 1, -1, -1).finished());
  DenseMatrix B(2, 1);
  B << 1, 0;
  Complex p(-0.5, std::sqrt(3.0) / 2.0);  // an eigenvalue of A

  AdiState st = adi_init(B);
  ShiftedSolver solver(A);
  adi_step_complex_pair(st, solver, p);
  CHECK(st.j == 2);

  ComplexDenseMatrix Wn = B.cast<Complex>(), Zn(2, 0);
  naive_step(A, p, Wn, Zn);
  naive_step(A, std::conj(p), Wn, Zn);

  CHECK(Wn.imag().norm() <= 1e-12);
  CHECK((st.W - Wn.real()).norm() <= 1e-10 * std::max(1.0, Wn.norm()));
  DenseMatrix X = st.Z * st.Z.transpose();
  DenseMatrix Xn = (Zn * Zn.adjoint()).real();
  CHECK((X - Xn).norm() <= 1e-10 * Xn.norm());
  double a = st.resnorm_abs();
  double b = (Wn.adjoint() * Wn).norm();
  // The shift is an eigenvalue, so both residuals sit at round-off; compare
  // with an absolute floor well above squared machine precision.
  CHECK(std::abs(a - b) <= 1e-10 * std::max(b, 1e-20));
}

TEST_CASE("pair oracle agreement on a nonsymmetric generated problem") {
  GeneratedProblem pr = gen_convdiff3d(5, 0.05, 7);
  Complex p(-1.3, 2.1);
  AdiState st = adi_init(pr.B);
  ShiftedSolver solver(pr.A);
  adi_step_complex_pair(st, solver, p);

  ComplexDenseMatrix Wn = pr.B.cast<Complex>(), Zn(pr.B.rows(), 0);
  naive_step(pr.A, p, Wn, Zn);
  naive_step(pr.A, std::conj(p), Wn, Zn);
  CHECK((st.W - Wn.real()).norm() <= 1e-10 * Wn.norm());
  DenseMatrix X = st.Z * st.Z.transpose();
  DenseMatrix Xn = (Zn * Zn.adjoint()).real();
  CHECK((X - Xn).norm() <= 1e-10 * Xn.norm());
  // Z and W exactly real by construction (they are real typed); also finite.
  CHECK(st.Z.allFinite());
  CHECK(st.W.allFinite());
}

TEST_CASE("adi_run converges on the h=30 Laplacian with online shifts") {
  GeneratedProblem p = gen_laplacian2d(30, 1, RhsKind::Random, 0);
  ProjectedShiftSource src(p.A, p.B, make_shift_strategy("hamiltonian"));
  AdiResult r = adi_run(p.A, p.B, src, 1e-8, 60);
  CHECK(r.report.status == SolveStatus::Converged);
  CHECK(r.report.iterations <= 60);
  DenseMatrix X = r.Z * r.Z.transpose();
  CHECK(lyap_residual_rel(DenseMatrix(p.A), X, p.B) <= 1e-8);
  // proper shift set
  std::vector<Complex> sorted = r.shifts;
  for (Complex s : r.shifts) {
    CHECK(s.real() < 0.0);
    if (s.imag() != 0.0) {
      CHECK(std::count(sorted.begin(), sorted.end(), std::conj(s)) >= 1);
    }
  }
}

TEST_CASE("vacuous tolerance runs zero steps") {
  GeneratedProblem p = gen_laplacian2d(5, 1);
  ProjectedShiftSource src(p.A, p.B, make_shift_strategy("hamiltonian"));
  AdiResult r = adi_run(p.A, p.B, src, 2.0, 100);
  CHECK(r.report.iterations == 0);
  CHECK(r.Z.cols() == 0);
}

TEST_CASE("replay source collapses conjugate pairs and cycles") {
  std::vector<Complex> consumed{{-1, 2}, {-1, -2}, {-3, 0}};
  ReplayShiftSource src(consumed);
  DenseMatrix dummy;
  ShiftProposal a = src.next(dummy);
  CHECK(a.is_pair);
  CHECK(a.p == Complex(-1, 2));
  ShiftProposal b = src.next(dummy);
  CHECK_FALSE(b.is_pair);
  CHECK(b.p == Complex(-3, 0));
  CHECK(src.next(dummy).p == Complex(-1, 2));  // wrapped
}

TEST_CASE("history rows carry shifts and nonincreasing trailing residual") {
  GeneratedProblem p = gen_laplacian2d(10, 1, RhsKind::Random, 2);
  ProjectedShiftSource src(p.A, p.B, make_shift_strategy("hamiltonian"));
  AdiResult r = adi_run(p.A, p.B, src, 1e-10, 60);
  REQUIRE(!r.report.history.empty());
  CHECK(r.report.history.back().resnorm_rel == doctest::Approx(r.report.final_resnorm_rel));
  for (size_t i = 0; i < r.report.history.size(); ++i) {
    CHECK(r.report.history[i].j == static_cast<int>(i) + 1);
  }
}

TEST_SUITE_END();
