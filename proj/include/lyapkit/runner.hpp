#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lyapkit/adi.hpp"
#include "lyapkit/kadi.hpp"
#include "lyapkit/testlab.hpp"

namespace lyapkit {

// Batch-run configuration shared by the CLI subcommands.
struct RunConfig {
  std::string method = "kadi-g";        // lradi | kadi-g | kadi-mr | kpik
  std::string shifts = "hamiltonian";   // hamiltonian | resmin | ritz
  double eps_out = 1e-8;
  std::string inner_tol = "relaxed";    // fixed:<value> | relaxed
  int max_iter = 200;                   // shift applications
  int max_space = 600;                  // basis columns (2q per block)
  std::string problem;                  // mm:<A>[,<E>],<B> | laplacian2d:h,q | convdiff3d:h,zeta
  unsigned seed = 0;
  std::string out_dir = ".";
  bool save_factor = false;
};

// Throws ConfigError on any invalid field or combination.
void validate_config(const RunConfig& cfg);

struct ProblemInstance {
  std::shared_ptr<StableOperator> op;
  std::optional<SparseMatrix> A;  // explicit sparse matrix, absent for transformed operators
  DenseMatrix B;
  std::function<DenseMatrix(const DenseMatrix&)> back_map;  // may be empty
  std::string name;
};

// Resolves the problem field: generators by name, or Matrix Market paths
// (with an optional SPD mass matrix E handled by congruence transform).
ProblemInstance load_problem(const RunConfig& cfg);

struct RunOutcome {
  SolveReport report;
  std::vector<Complex> shifts;  // consumed shifts (empty for kpik)
  DenseMatrix Z;
};

// Method dispatch on an already-loaded problem.  A must be present for
// lradi; replay_shifts replaces the online strategy when given.
RunOutcome run_on_operator(const std::shared_ptr<StableOperator>& op,
                           const std::optional<SparseMatrix>& A, const DenseMatrix& B,
                           const RunConfig& cfg,
                           const std::vector<Complex>* replay_shifts = nullptr);

// Runs one configuration in memory.  When replay_shifts is given the solver
// consumes exactly that sequence instead of its online strategy.
RunOutcome run_config(const RunConfig& cfg,
                      const std::vector<Complex>* replay_shifts = nullptr);

// out_dir after the LYAPKIT_OUT environment override.
std::string resolve_out_dir(const std::string& out_dir);

void write_history_csv(const std::string& path, const SolveReport& report);
void write_summary_json(const std::string& path, const RunConfig& cfg, const SolveReport& report);
void write_shifts_json(const std::string& path, const std::vector<Complex>& shifts);

// Stable diagnostic name for the documented error set.
const char* error_name(const std::exception& e);

// 0 success, 2 config error, 3 solver failure, 4 I/O error.
int exit_code_for(const std::exception& e);

// Full solve pipeline: validate, load, run, write residual_history.csv,
// summary.json, shifts.json (and Z.mtx with save_factor) under out_dir.
// Returns an exit code; diagnostics go to stderr.
int cmd_solve(const RunConfig& cfg);

// Runs >= 2 configs on one shared problem, one run directory each, and writes
// compare.csv (one row per config).  shared_shifts replays the first run's
// shift sequence into the others and emits per-step residual-gap CSVs.
int cmd_compare(const std::vector<RunConfig>& configs, bool shared_shifts,
                const std::string& out_dir);

}  // namespace lyapkit
