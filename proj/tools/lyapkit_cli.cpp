// Batch front end: generate or load a Lyapunov problem, run a solver
// configuration, emit residual histories and summaries.
#include <CLI11.hpp>
#include <iostream>

#include "lyapkit/runner.hpp"

namespace {

void add_run_flags(CLI::App* cmd, lyapkit::RunConfig* cfg) {
  cmd->add_option("--shifts", cfg->shifts, "shift strategy: hamiltonian|resmin|ritz");
  cmd->add_option("--eps_out", cfg->eps_out, "outer relative residual tolerance");
  cmd->add_option("--inner_tol", cfg->inner_tol, "inner tolerance: fixed:<value>|relaxed");
  cmd->add_option("--max_iter", cfg->max_iter, "maximum shift applications");
  cmd->add_option("--max_space", cfg->max_space, "maximum basis columns");
  cmd->add_option("--problem", cfg->problem,
                  "mm:<A>[,<E>],<B> | laplacian2d:h,q | convdiff3d:h,zeta")
      ->required();
  cmd->add_option("--seed", cfg->seed, "rhs generator seed");
  cmd->add_option("--out_dir", cfg->out_dir, "output directory (LYAPKIT_OUT overrides)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank Lyapunov equation solver toolkit"};
  app.require_subcommand(1);

  lyapkit::RunConfig solve_cfg;
  CLI::App* solve = app.add_subcommand("solve", "run one solver configuration");
  solve->add_option("--method", solve_cfg.method, "lradi|kadi-g|kadi-mr|kpik");
  add_run_flags(solve, &solve_cfg);
  solve->add_flag("--save_factor", solve_cfg.save_factor, "also write the Z factor (Z.mtx)");

  lyapkit::RunConfig cmp_cfg;
  std::vector<std::string> cmp_methods;
  bool shared_shifts = false;
  CLI::App* compare = app.add_subcommand("compare", "run several methods on one problem");
  compare->add_option("--methods", cmp_methods, "two or more of lradi|kadi-g|kadi-mr|kpik")
      ->required()
      ->delimiter(',');
  add_run_flags(compare, &cmp_cfg);
  compare->add_flag("--shared_shifts", shared_shifts,
                    "replay the first method's shifts into the others");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // malformed flags are a config error
  }

  if (solve->parsed()) return lyapkit::cmd_solve(solve_cfg);

  std::vector<lyapkit::RunConfig> configs;
  for (const std::string& m : cmp_methods) {
    lyapkit::RunConfig c = cmp_cfg;
    c.method = m;
    configs.push_back(c);
  }
  return lyapkit::cmd_compare(configs, shared_shifts, cmp_cfg.out_dir);
}
