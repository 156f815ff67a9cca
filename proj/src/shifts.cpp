#include "lyapkit/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace lyapkit {

namespace {

constexpr double kImagDrop = 1e-12;  // relative threshold below which a shift is treated as real

ShiftProposal to_proposal(Complex p) {
  ShiftProposal out;
  if (std::abs(p.imag()) <= kImagDrop * std::abs(p)) {
    out.p = Complex(p.real(), 0.0);
    out.is_pair = false;
  } else {
    // Canonical representative of the conjugate pair has Im > 0.
    out.p = Complex(p.real(), std::abs(p.imag()));
    out.is_pair = true;
  }
  return out;
}

// Reflect Ritz values into the left half plane when the projection has no
// stable eigenvalue; logged as a diagnostic.
Complex reflected_fallback(const DenseMatrix& T) {
  std::vector<EigPair> eigs = dense_eig(T);
  Complex best(0.0, 0.0);
  for (const auto& e : eigs) {
    Complex r(-std::abs(e.value.real()), -e.value.imag());
    if (r.real() < best.real()) best = r;
  }
  if (best.real() >= 0.0) {
    throw NoStableShift("no eigenvalue with nonzero real part to reflect");
  }
  std::cerr << "lyapkit: warning: no stable projected eigenpair, reflecting Ritz values\n";
  return best;
}

}  // namespace

ShiftProposal hamiltonian_shift(const ShiftContext& ctx) {
  const Eigen::Index k = ctx.T.rows();
  DenseMatrix H = DenseMatrix::Zero(2 * k, 2 * k);
  H.topLeftCorner(k, k) = ctx.T.transpose();
  H.bottomLeftCorner(k, k) = ctx.ups * ctx.ups.transpose();
  H.bottomRightCorner(k, k) = -ctx.T;

  std::vector<EigPair> eigs = dense_eig(H);
  bool found = false;
  Complex best(0.0, 0.0);
  double best_score = -1.0;
  for (const auto& e : eigs) {
    if (e.value.real() >= 0.0) continue;
    const double score = e.vector.tail(k).norm();  // eigenvector is unit norm
    bool better;
    if (!found) {
      better = true;
    } else if (std::abs(score - best_score) <= 1e-12 * std::max(score, best_score)) {
      // Tie: smaller |Im|, then more negative Re.
      better = std::abs(e.value.imag()) < std::abs(best.imag()) ||
               (std::abs(e.value.imag()) == std::abs(best.imag()) && e.value.real() < best.real());
    } else {
      better = score > best_score;
    }
    if (better) {
      best = e.value;
      best_score = score;
      found = true;
    }
  }
  if (!found) return to_proposal(reflected_fallback(ctx.T));
  return to_proposal(best);
}

double resmin_objective(const ShiftContext& ctx, double theta, double xi) {
  if (theta >= 0.0 || !std::isfinite(theta) || !std::isfinite(xi)) {
    return std::numeric_limits<double>::infinity();
  }
  ComplexDenseMatrix M = ctx.T.cast<Complex>();
  M.diagonal().array() += Complex(theta, xi);
  ComplexDenseMatrix S;
  try {
    S = dense_solve_cx(M, ctx.ups.cast<Complex>());
  } catch (const SingularProjectedSystem&) {
    return std::numeric_limits<double>::infinity();
  }
  double r = (ctx.ups.cast<Complex>() - 2.0 * theta * S).norm();
  return r * r;
}

ShiftProposal resmin_shift(const ShiftContext& ctx) {
  ShiftProposal start = hamiltonian_shift(ctx);
  if (ctx.ups.norm() == 0.0) return start;  // degenerate objective, any stable shift valid

  struct Vertex {
    double theta, xi, f;
  };
  auto eval = [&](double th, double xi) { return resmin_objective(ctx, th, xi); };

  const double th0 = start.p.real();
  const double xi0 = start.p.imag();
  std::vector<Vertex> simplex = {
      {th0, xi0, eval(th0, xi0)},
      {th0 * 1.25, xi0, eval(th0 * 1.25, xi0)},
      {th0, xi0 + 0.25 * std::max(1.0, std::abs(th0)), 0.0},
  };
  simplex[2].f = eval(simplex[2].theta, simplex[2].xi);

  int evals = 3;
  const int budget = 100;
  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  while (evals < budget) {
    std::sort(simplex.begin(), simplex.end(), by_f);
    const Vertex& b = simplex[0];
    const Vertex& w = simplex[2];
    double cth = (simplex[0].theta + simplex[1].theta) / 2.0;
    double cxi = (simplex[0].xi + simplex[1].xi) / 2.0;
    // Reflection.
    Vertex r{cth + (cth - w.theta), cxi + (cxi - w.xi), 0.0};
    r.f = eval(r.theta, r.xi);
    ++evals;
    if (r.f < b.f) {
      // Expansion.
      Vertex e{cth + 2.0 * (cth - w.theta), cxi + 2.0 * (cxi - w.xi), 0.0};
      e.f = eval(e.theta, e.xi);
      ++evals;
      simplex[2] = (e.f < r.f) ? e : r;
    } else if (r.f < simplex[1].f) {
      simplex[2] = r;
    } else {
      // Contraction toward the centroid.
      Vertex c{cth + 0.5 * (w.theta - cth), cxi + 0.5 * (w.xi - cxi), 0.0};
      c.f = eval(c.theta, c.xi);
      ++evals;
      if (c.f < w.f) {
        simplex[2] = c;
      } else {
        // Shrink toward the best vertex.
        for (int i = 1; i < 3; ++i) {
          simplex[i].theta = b.theta + 0.5 * (simplex[i].theta - b.theta);
          simplex[i].xi = b.xi + 0.5 * (simplex[i].xi - b.xi);
          simplex[i].f = eval(simplex[i].theta, simplex[i].xi);
          ++evals;
        }
      }
    }
    double spread = std::abs(simplex[0].f - simplex[2].f);
    if (spread <= 1e-14 * (1.0 + std::abs(simplex[0].f))) break;
  }
  std::sort(simplex.begin(), simplex.end(), by_f);
  const Vertex& best = simplex[0];
  if (!(best.theta < 0.0)) {
    throw NoStableShift("resmin optimizer failed to produce a stable shift");
  }
  return to_proposal(Complex(best.theta, best.xi));
}

ShiftProposal initial_shift(const ExtendedKrylovBasis& basis) {
  ShiftContext ctx{basis.Tm(1), basis.gamma()};
  return hamiltonian_shift(ctx);
}

ShiftProposal RitzCycleShifts::next(const ShiftContext& ctx) {
  std::vector<EigPair> eigs = dense_eig(ctx.T);
  std::vector<Complex> stable;
  for (const auto& e : eigs) {
    if (e.value.real() < 0.0 && e.value.imag() >= -kImagDrop * std::abs(e.value)) {
      stable.push_back(e.value);  // one representative per conjugate pair
    }
  }
  if (stable.empty()) return to_proposal(reflected_fallback(ctx.T));
  std::sort(stable.begin(), stable.end(), [](Complex a, Complex b) {
    if (std::abs(a.real()) != std::abs(b.real())) return std::abs(a.real()) > std::abs(b.real());
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  ShiftProposal out = to_proposal(stable[cursor_ % stable.size()]);
  ++cursor_;
  return out;
}

std::unique_ptr<ShiftStrategy> make_shift_strategy(const std::string& name) {
  if (name == "hamiltonian") return std::make_unique<HamiltonianShifts>();
  if (name == "resmin") return std::make_unique<ResMinShifts>();
  if (name == "ritz") return std::make_unique<RitzCycleShifts>();
  throw std::invalid_argument("unknown shift strategy: " + name);
}

std::vector<ShiftProposal> collapse_conjugate_pairs(const std::vector<Complex>& consumed) {
  std::vector<ShiftProposal> out;
  for (size_t i = 0; i < consumed.size(); ++i) {
    Complex p = consumed[i];
    ShiftProposal prop;
    if (p.imag() == 0.0) {
      prop.p = p;
      prop.is_pair = false;
    } else {
      prop.p = Complex(p.real(), std::abs(p.imag()));
      prop.is_pair = true;
      // Skip the recorded conjugate partner.
      if (i + 1 < consumed.size() && consumed[i + 1] == std::conj(p)) ++i;
    }
    out.push_back(prop);
  }
  if (out.empty()) throw std::invalid_argument("empty shift sequence");
  return out;
}

ReplayShiftStrategy::ReplayShiftStrategy(const std::vector<Complex>& consumed)
    : proposals_(collapse_conjugate_pairs(consumed)) {}

ShiftProposal ReplayShiftStrategy::next(const ShiftContext&) {
  ShiftProposal out = proposals_[cursor_ % proposals_.size()];
  ++cursor_;
  return out;
}

}  // namespace lyapkit
