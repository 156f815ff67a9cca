#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lyapkit/runner.hpp"

namespace py = pybind11;
using namespace lyapkit;

namespace {

py::dict report_to_dict(const SolveReport& r) {
  py::list hist;
  for (const IterRecord& rec : r.history) {
    hist.append(py::dict(
        py::arg("j") = rec.j, py::arg("m") = rec.m_blocks, py::arg("space_dim") = rec.space_dim,
        py::arg("resnorm_abs") = rec.resnorm_abs, py::arg("resnorm_rel") = rec.resnorm_rel,
        py::arg("shift") = rec.shift, py::arg("eps_inn") = rec.eps_inn));
  }
  return py::dict(py::arg("method") = r.method, py::arg("status") = to_string(r.status),
                  py::arg("history") = hist, py::arg("iterations") = r.iterations,
                  py::arg("space_dim") = r.space_dim, py::arg("factor_cols") = r.factor_cols,
                  py::arg("final_resnorm_rel") = r.final_resnorm_rel,
                  py::arg("wall_time_s") = r.wall_time_s);
}

}  // namespace

PYBIND11_MODULE(_lyapkit, m) {
  m.doc() = "low-rank Lyapunov equation solvers (LR-ADI, merged ADI/extended-Krylov, K-PIK)";

  m.def(
      "solve",
      [](const SparseMatrix& A, const DenseMatrix& B, const std::string& method,
         const std::string& shifts, double eps_out, const std::string& inner_tol, int max_iter,
         int max_space, std::optional<std::vector<Complex>> replay_shifts) {
        RunConfig cfg;
        cfg.method = method;
        cfg.shifts = shifts;
        cfg.eps_out = eps_out;
        cfg.inner_tol = inner_tol;
        cfg.max_iter = max_iter;
        cfg.max_space = max_space;
        cfg.problem = "inline";  // not used by run_on_operator
        validate_config(cfg);
        auto op = std::make_shared<SparseOperator>(A);
        RunOutcome out =
            run_on_operator(op, A, B, cfg, replay_shifts ? &*replay_shifts : nullptr);
        return py::make_tuple(out.Z, out.shifts, report_to_dict(out.report));
      },
      py::arg("A"), py::arg("B"), py::arg("method") = "kadi-g",
      py::arg("shifts") = "hamiltonian", py::arg("eps_out") = 1e-8,
      py::arg("inner_tol") = "relaxed", py::arg("max_iter") = 200, py::arg("max_space") = 600,
      py::arg("replay_shifts") = py::none(),
      "Solve A X + X A^T + B B^T = 0; returns (Z, consumed_shifts, report).");

  m.def(
      "gen_laplacian2d",
      [](int h, int q, unsigned seed) {
        GeneratedProblem p = gen_laplacian2d(h, q, RhsKind::Random, seed);
        return py::make_tuple(p.A, p.B);
      },
      py::arg("h"), py::arg("q") = 1, py::arg("seed") = 0);

  m.def(
      "gen_convdiff3d",
      [](int h, double zeta, unsigned seed) {
        GeneratedProblem p = gen_convdiff3d(h, zeta, seed);
        return py::make_tuple(p.A, p.B);
      },
      py::arg("h"), py::arg("zeta"), py::arg("seed") = 0);

  m.def("kron_lyap_solve", &kron_lyap_solve, py::arg("A"), py::arg("B"),
        "Dense small-scale Lyapunov solution oracle.");
  m.def("dense_lyap_residual", &dense_lyap_residual, py::arg("A"), py::arg("X"), py::arg("B"),
        "||A X + X A^T + B B^T||_F / ||B^T B||_F.");

  py::register_exception<ConfigError>(m, "LyapkitConfigError", PyExc_ValueError);
  py::register_exception<NoStableShift>(m, "NoStableShiftError", PyExc_RuntimeError);
}
