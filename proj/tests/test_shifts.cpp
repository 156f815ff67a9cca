#include <doctest.h>

#include "helpers.hpp"
#include "lyapkit/shifts.hpp"

using namespace lyapkit;
using namespace lyapkit::testing;

TEST_SUITE_BEGIN("shifts");

namespace {

// Independent re-implementation of the residual-Hamiltonian selection:
// eigendecompose [[T', 0],[ups ups', -T]], keep stable eigenvalues, argmax of
// the lower-block 2-norm of the unit-norm eigenvector.
Complex brute_force_hamiltonian(const DenseMatrix& T, const DenseMatrix& ups) {
  const Eigen::Index k = T.rows();
  DenseMatrix H = DenseMatrix::Zero(2 * k, 2 * k);
  H.topLeftCorner(k, k) = T.transpose();
  H.bottomLeftCorner(k, k) = ups * ups.transpose();
  H.bottomRightCorner(k, k) = -T;
  auto eigs = dense_eig(H);
  double best = -1.0;
  Complex arg(0, 0);
  for (const auto& e : eigs) {
    if (e.value.real() >= 0.0) continue;
    double tn = e.vector.tail(k).norm();
    if (tn > best * (1.0 + 1e-12)) {
      best = tn;
      arg = e.value;
    }
  }
  return arg;
}

double grid_search_resmin(const ShiftContext& ctx, double th_lo, double th_hi, double xi_lo,
                          double xi_hi, int steps, Complex* argmin) {
  double best = 1e300;
  for (int i = 0; i <= steps; ++i) {
    double th = th_lo + (th_hi - th_lo) * i / steps;
    for (int j = 0; j <= steps; ++j) {
      double xi = xi_lo + (xi_hi - xi_lo) * j / steps;
      double f = resmin_objective(ctx, th, xi);
      if (f < best) {
        best = f;
        *argmin = Complex(th, xi);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("hamiltonian shift on diag(-1,-2)") {
  ShiftContext ctx;
  ctx.T = (DenseMatrix(2, 2) << -1, 0, 0, -2).finished();
  ctx.ups = DenseMatrix::Zero(2, 1);
  ctx.ups(0, 0) = 1.0;
  ShiftProposal prop = hamiltonian_shift(ctx);
  CHECK(prop.p.imag() == 0.0);
  CHECK((prop.p.real() == doctest::Approx(-1.0) || prop.p.real() == doctest::Approx(-2.0)));
  CHECK(prop.p.real() < 0.0);
}

TEST_CASE("hamiltonian selection matches brute force on random contexts") {
  int checked = 0;
  for (unsigned seed = 0; seed < 50; ++seed) {
    ShiftContext ctx;
    ctx.T = random_stable(8, seed, 0.4);
    ctx.ups = random_dense(8, 1, seed + 1000);
    ShiftProposal prop = hamiltonian_shift(ctx);
    Complex ref = brute_force_hamiltonian(ctx.T, ctx.ups);
    // Compare up to conjugation (the proposal canonicalizes Im > 0).
    CHECK(prop.p.real() == doctest::Approx(ref.real()).epsilon(1e-8));
    CHECK(std::abs(prop.p.imag()) == doctest::Approx(std::abs(ref.imag())).epsilon(1e-8));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("symmetric context yields a real shift") {
  ShiftContext ctx;
  DenseMatrix G = random_dense(6, 6, 77);
  ctx.T = -(G * G.transpose()) / 6.0 - DenseMatrix::Identity(6, 6);
  ctx.ups = random_dense(6, 1, 78);
  ShiftProposal prop = hamiltonian_shift(ctx);
  CHECK(prop.p.imag() == 0.0);
  CHECK_FALSE(prop.is_pair);
}

TEST_CASE("resmin on diag(-1,-2) finds the exact minimizer (-1, 0)") {
  ShiftContext ctx;
  ctx.T = (DenseMatrix(2, 2) << -1, 0, 0, -2).finished();
  ctx.ups = DenseMatrix::Zero(2, 1);
  ctx.ups(0, 0) = 1.0;
  ShiftProposal prop = resmin_shift(ctx);
  Complex grid_arg;
  grid_search_resmin(ctx, -3.0, -0.1, -1.0, 1.0, 200, &grid_arg);
  CHECK(std::abs(prop.p.real() - grid_arg.real()) <= 1e-3);
  CHECK(std::abs(prop.p.imag() - grid_arg.imag()) <= 1e-3);
  CHECK(prop.p.real() == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(resmin_objective(ctx, prop.p.real(), prop.p.imag()) <= 1e-10);
}

TEST_CASE("resmin never exceeds its hamiltonian starting value") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    ShiftContext ctx;
    ctx.T = random_stable(6, seed, 0.3);
    ctx.ups = random_dense(6, 1, seed + 500);
    ShiftProposal start = hamiltonian_shift(ctx);
    ShiftProposal opt = resmin_shift(ctx);
    double f_start = resmin_objective(ctx, start.p.real(), start.p.imag());
    double f_opt = resmin_objective(ctx, opt.p.real(), opt.p.imag());
    CHECK(f_opt <= f_start + 1e-12);
    CHECK(opt.p.real() < 0.0);
  }
}

TEST_CASE("resmin with zero residual factor returns the starting proposal") {
  ShiftContext ctx;
  ctx.T = (DenseMatrix(2, 2) << -1, 0, 0, -2).finished();
  ctx.ups = DenseMatrix::Zero(2, 1);
  ShiftProposal prop = resmin_shift(ctx);
  CHECK(prop.p.real() < 0.0);
}

TEST_CASE("ritz cycling order and wrap-around") {
  ShiftContext ctx;
  ctx.T = (DenseMatrix(2, 2) << -1, 0, 0, -2).finished();
  ctx.ups = DenseMatrix::Ones(2, 1);
  RitzCycleShifts strat;
  ShiftProposal a = strat.next(ctx);
  ShiftProposal b = strat.next(ctx);
  ShiftProposal c = strat.next(ctx);
  CHECK(a.p.real() == doctest::Approx(-2.0));  // descending |Re|
  CHECK(b.p.real() == doctest::Approx(-1.0));
  CHECK(c.p.real() == doctest::Approx(-2.0));  // wrapped
}

TEST_CASE("ritz cycling pairs complex values") {
  ShiftContext ctx;
  ctx.T = (DenseMatrix(2, 2) << -1, 2, -2, -1).finished();  // spectrum -1 +/- 2i
  ctx.ups = DenseMatrix::Ones(2, 1);
  RitzCycleShifts strat;
  ShiftProposal a = strat.next(ctx);
  CHECK(a.is_pair);
  CHECK(a.p.imag() > 0.0);
  CHECK(a.p.real() == doctest::Approx(-1.0));
}

TEST_CASE("unstable projection falls back to reflected shifts") {
  ShiftContext ctx;
  ctx.T = (DenseMatrix(2, 2) << 1, 0, 0, 2).finished();  // antistable
  ctx.ups = DenseMatrix::Ones(2, 1);
  ShiftProposal prop = hamiltonian_shift(ctx);
  CHECK(prop.p.real() < 0.0);
}

TEST_CASE("strategy registry") {
  CHECK(make_shift_strategy("hamiltonian") != nullptr);
  CHECK(make_shift_strategy("resmin") != nullptr);
  CHECK(make_shift_strategy("ritz") != nullptr);
  CHECK_THROWS(make_shift_strategy("nope"));
}

TEST_SUITE_END();
