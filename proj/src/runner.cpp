#include "lyapkit/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "lyapkit/matrix_market.hpp"

namespace lyapkit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Accepts "value" or "key=value"; the key is not checked beyond stripping.
std::string strip_key(const std::string& tok) {
  size_t eq = tok.find('=');
  return eq == std::string::npos ? tok : tok.substr(eq + 1);
}

double parse_double(const std::string& tok, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(strip_key(tok), &used);
    if (used != strip_key(tok).size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + tok + "'");
  }
}

int parse_int(const std::string& tok, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(strip_key(tok), &used);
    if (used != strip_key(tok).size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + tok + "'");
  }
}

std::unique_ptr<InnerTolSchedule> parse_inner_tol(const std::string& spec) {
  if (spec == "relaxed") return std::make_unique<RelaxedInnerTol>();
  if (spec.rfind("fixed:", 0) == 0) {
    double v = parse_double(spec.substr(6), "inner tolerance");
    if (v <= 0.0) throw ConfigError("fixed inner tolerance must be > 0");
    return std::make_unique<FixedInnerTol>(v);
  }
  throw ConfigError("inner_tol must be 'relaxed' or 'fixed:<value>', got '" + spec + "'");
}

bool is_diagonal(const SparseMatrix& E) {
  for (Eigen::Index c = 0; c < E.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(E, c); it; ++it) {
      if (it.row() != it.col() && it.value() != 0.0) return false;
    }
  }
  return true;
}

std::string fmt16(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot open for writing: " + path);
  return out;
}

json config_json(const RunConfig& cfg) {
  return json{{"method", cfg.method},       {"shifts", cfg.shifts},
              {"eps_out", cfg.eps_out},     {"inner_tol", cfg.inner_tol},
              {"max_iter", cfg.max_iter},   {"max_space", cfg.max_space},
              {"problem", cfg.problem},     {"seed", cfg.seed},
              {"out_dir", cfg.out_dir},     {"save_factor", cfg.save_factor}};
}

void write_run_files(const std::string& dir, const RunConfig& cfg, const RunOutcome& outcome) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IOError("cannot create output directory: " + dir);
  write_history_csv(dir + "/residual_history.csv", outcome.report);
  write_summary_json(dir + "/summary.json", cfg, outcome.report);
  write_shifts_json(dir + "/shifts.json", outcome.shifts);
  if (cfg.save_factor) write_dense_mm(dir + "/Z.mtx", outcome.Z);
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  if (cfg.method != "lradi" && cfg.method != "kadi-g" && cfg.method != "kadi-mr" &&
      cfg.method != "kpik") {
    throw ConfigError("unknown method '" + cfg.method + "'");
  }
  if (cfg.shifts != "hamiltonian" && cfg.shifts != "resmin" && cfg.shifts != "ritz") {
    throw ConfigError("unknown shift strategy '" + cfg.shifts + "'");
  }
  if (!(cfg.eps_out > 0.0)) throw ConfigError("eps_out must be > 0");
  parse_inner_tol(cfg.inner_tol);
  if (cfg.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (cfg.max_space < 2) throw ConfigError("max_space must be >= 2");
  if (cfg.problem.empty()) throw ConfigError("no problem source given");
}

ProblemInstance load_problem(const RunConfig& cfg) {
  size_t colon = cfg.problem.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("problem must look like '<kind>:<args>', got '" + cfg.problem + "'");
  }
  const std::string kind = cfg.problem.substr(0, colon);
  const std::vector<std::string> args = split(cfg.problem.substr(colon + 1), ',');

  ProblemInstance out;
  if (kind == "laplacian2d") {
    if (args.size() != 2) throw ConfigError("laplacian2d needs h,q");
    int h = parse_int(args[0], "h"), q = parse_int(args[1], "q");
    if (h < 2 || q < 1) throw ConfigError("laplacian2d needs h >= 2, q >= 1");
    GeneratedProblem gp = gen_laplacian2d(h, q, RhsKind::Random, cfg.seed);
    out.A = gp.A;
    out.op = std::make_shared<SparseOperator>(gp.A, /*symmetric=*/true);
    out.B = gp.B;
    out.name = gp.name;
  } else if (kind == "convdiff3d") {
    if (args.size() != 2) throw ConfigError("convdiff3d needs h,zeta");
    int h = parse_int(args[0], "h");
    double zeta = parse_double(args[1], "zeta");
    if (h < 3 || zeta <= 0.0) throw ConfigError("convdiff3d needs h >= 3, zeta > 0");
    GeneratedProblem gp = gen_convdiff3d(h, zeta, cfg.seed);
    out.A = gp.A;
    out.op = std::make_shared<SparseOperator>(gp.A);
    out.B = gp.B;
    out.name = gp.name;
  } else if (kind == "mm") {
    if (args.size() != 2 && args.size() != 3) throw ConfigError("mm needs <A>[,<E>],<B> paths");
    SparseMatrix A = read_sparse_mm(args[0]);
    DenseMatrix B = read_dense_mm(args.back());
    if (A.rows() != B.rows()) throw ConfigError("A and B row counts differ");
    out.name = "mm";
    if (args.size() == 2) {
      out.A = A;
      out.op = std::make_shared<SparseOperator>(A);
      out.B = B;
    } else {
      SparseMatrix E = read_sparse_mm(args[1]);
      if (E.rows() != A.rows()) throw ConfigError("E and A dimensions differ");
      TransformedProblem tp = is_diagonal(E)
                                  ? transform_diag_e(A, Eigen::VectorXd(E.diagonal()), B)
                                  : transform_chol_e(A, E, B);
      out.op = tp.op;
      out.B = tp.B;
      out.back_map = tp.back_map;
    }
  } else {
    throw ConfigError("unknown problem kind '" + kind + "'");
  }
  return out;
}

RunOutcome run_on_operator(const std::shared_ptr<StableOperator>& op,
                           const std::optional<SparseMatrix>& A, const DenseMatrix& B,
                           const RunConfig& cfg, const std::vector<Complex>* replay_shifts) {
  const int q = static_cast<int>(B.cols());
  const int m_max = std::max(1, cfg.max_space / (2 * q));

  RunOutcome out;
  if (cfg.method == "lradi") {
    if (!A) {
      throw ConfigError("lradi needs an explicit sparse matrix (no mass-matrix transform)");
    }
    std::unique_ptr<ShiftSource> src;
    if (replay_shifts) {
      src = std::make_unique<ReplayShiftSource>(*replay_shifts);
    } else {
      src = std::make_unique<ProjectedShiftSource>(*A, B, make_shift_strategy(cfg.shifts));
    }
    AdiResult r = adi_run(*A, B, *src, cfg.eps_out, cfg.max_iter);
    out.report = std::move(r.report);
    out.shifts = std::move(r.shifts);
    out.Z = std::move(r.Z);
  } else if (cfg.method == "kpik") {
    KpikResult r = kpik_solve(*op, B, cfg.eps_out, m_max);
    out.report = std::move(r.report);
    out.Z = std::move(r.Z);
  } else {
    const InnerVariant variant =
        cfg.method == "kadi-g" ? InnerVariant::Galerkin : InnerVariant::MinRes;
    std::unique_ptr<ShiftStrategy> strategy;
    if (replay_shifts) {
      strategy = std::make_unique<ReplayShiftStrategy>(*replay_shifts);
    } else {
      strategy = make_shift_strategy(cfg.shifts);
    }
    std::unique_ptr<InnerTolSchedule> sched = parse_inner_tol(cfg.inner_tol);
    KadiResult r =
        kadi_run(*op, B, *strategy, variant, cfg.eps_out, *sched, m_max, cfg.max_iter);
    out.report = std::move(r.report);
    out.shifts = std::move(r.shifts);
    out.Z = std::move(r.Z);
  }
  return out;
}

RunOutcome run_config(const RunConfig& cfg, const std::vector<Complex>* replay_shifts) {
  validate_config(cfg);
  ProblemInstance prob = load_problem(cfg);
  RunOutcome out = run_on_operator(prob.op, prob.A, prob.B, cfg, replay_shifts);
  if (prob.back_map) out.Z = prob.back_map(out.Z);
  return out;
}

std::string resolve_out_dir(const std::string& out_dir) {
  const char* env = std::getenv("LYAPKIT_OUT");
  return env && *env ? std::string(env) : out_dir;
}

void write_history_csv(const std::string& path, const SolveReport& report) {
  std::ofstream out = open_out(path);
  out << "j,m,space_dim,resnorm_abs,resnorm_rel,shift_re,shift_im,eps_inn\n";
  const bool no_shifts = report.method == "kpik";
  for (const IterRecord& r : report.history) {
    out << r.j << ',' << r.m_blocks << ',' << r.space_dim << ',' << fmt16(r.resnorm_abs) << ','
        << fmt16(r.resnorm_rel) << ',';
    if (no_shifts) {
      out << ',';
    } else {
      out << fmt16(r.shift.real()) << ',' << fmt16(r.shift.imag());
    }
    out << ',';
    if (r.eps_inn > 0.0) out << fmt16(r.eps_inn);
    out << '\n';
  }
}

void write_summary_json(const std::string& path, const RunConfig& cfg, const SolveReport& report) {
  json j{{"method", report.method},
         {"status", to_string(report.status)},
         {"iterations", report.iterations},
         {"space_dim", report.space_dim},
         {"factor_cols", report.factor_cols},
         {"final_resnorm_rel", report.final_resnorm_rel},
         {"wall_time_s", report.wall_time_s},
         {"config", config_json(cfg)}};
  open_out(path) << j.dump(2) << '\n';
}

void write_shifts_json(const std::string& path, const std::vector<Complex>& shifts) {
  json arr = json::array();
  for (Complex p : shifts) arr.push_back(json::array({p.real(), p.imag()}));
  open_out(path) << arr.dump(2) << '\n';
}

const char* error_name(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const IOError*>(&e)) return "IOError";
  if (dynamic_cast<const SingularMatrix*>(&e)) return "SingularMatrix";
  if (dynamic_cast<const SingularProjectedSystem*>(&e)) return "SingularProjectedSystem";
  if (dynamic_cast<const RankDeficientLS*>(&e)) return "RankDeficientLS";
  if (dynamic_cast<const EigFailure*>(&e)) return "EigFailure";
  if (dynamic_cast<const BreakdownError*>(&e)) return "BreakdownError";
  if (dynamic_cast<const NoStableShift*>(&e)) return "NoStableShift";
  if (dynamic_cast<const NotSPD*>(&e)) return "NotSPD";
  return "Error";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const IOError*>(&e)) return 4;
  return 3;
}

int cmd_solve(const RunConfig& cfg) {
  RunOutcome outcome;
  try {
    outcome = run_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_name(e) << ": " << e.what() << '\n';
    return exit_code_for(e);
  }
  try {
    write_run_files(resolve_out_dir(cfg.out_dir), cfg, outcome);
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_name(e) << ": " << e.what() << '\n';
    return 4;
  }
  if (outcome.report.status != SolveStatus::Converged) {
    std::cerr << "warning: solver stopped with status " << to_string(outcome.report.status)
              << " at relative residual " << outcome.report.final_resnorm_rel << '\n';
  }
  return 0;
}

int cmd_compare(const std::vector<RunConfig>& configs, bool shared_shifts,
                const std::string& out_dir) {
  std::vector<std::string> rows;
  const std::string root = resolve_out_dir(out_dir);
  auto flush_rows = [&]() {
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IOError("cannot create output directory: " + root);
    std::ofstream out = open_out(root + "/compare.csv");
    out << "method,shifts,status,iterations,space_dim,factor_cols,final_resnorm_rel,"
           "wall_time_s\n";
    for (const std::string& r : rows) out << r << '\n';
  };

  try {
    if (configs.size() < 2) throw ConfigError("compare needs >= 2 configs");
    for (const RunConfig& cfg : configs) {
      validate_config(cfg);
      if (cfg.problem != configs.front().problem || cfg.seed != configs.front().seed) {
        throw ConfigError("compare configs must share one problem and seed");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_name(e) << ": " << e.what() << '\n';
    return exit_code_for(e);
  }

  std::vector<Complex> base_shifts;
  SolveReport base_report;
  for (size_t i = 0; i < configs.size(); ++i) {
    RunConfig cfg = configs[i];
    cfg.out_dir = root + "/run_" + std::to_string(i) + "_" + cfg.method;
    const bool replay = shared_shifts && i > 0 && cfg.method != "kpik";
    std::string shift_col = cfg.method == "kpik" ? "" : (replay ? "shared" : cfg.shifts);
    RunOutcome outcome;
    try {
      if (replay && base_shifts.empty()) {
        throw ConfigError("shared-shifts mode needs a shift-consuming first config");
      }
      outcome = run_config(cfg, replay ? &base_shifts : nullptr);
      write_run_files(cfg.out_dir, cfg, outcome);
    } catch (const std::exception& e) {
      std::cerr << "error: " << error_name(e) << ": " << e.what() << '\n';
      rows.push_back(cfg.method + "," + shift_col + ",FAILED:" + error_name(e) + ",,,,,");
      try {
        flush_rows();
      } catch (const std::exception& io) {
        std::cerr << "error: " << error_name(io) << ": " << io.what() << '\n';
        return 4;
      }
      return exit_code_for(e);
    }

    rows.push_back(cfg.method + "," + shift_col + "," + to_string(outcome.report.status) + "," +
                   std::to_string(outcome.report.iterations) + "," +
                   std::to_string(outcome.report.space_dim) + "," +
                   std::to_string(outcome.report.factor_cols) + "," +
                   fmt16(outcome.report.final_resnorm_rel) + "," +
                   fmt16(outcome.report.wall_time_s));

    if (i == 0) {
      base_shifts = outcome.shifts;
      base_report = outcome.report;
      if (shared_shifts) write_shifts_json(root + "/shifts.json", base_shifts);
    } else if (shared_shifts && cfg.method != "kpik") {
      // Per-step relative gap against the first run, rows aligned by position.
      std::ofstream gap = open_out(cfg.out_dir + "/residual_gap.csv");
      gap << "j,resnorm_rel_base,resnorm_rel_run,gap_rel\n";
      const size_t len = std::min(base_report.history.size(), outcome.report.history.size());
      for (size_t k = 0; k < len; ++k) {
        const double a = base_report.history[k].resnorm_rel;
        const double b = outcome.report.history[k].resnorm_rel;
        gap << outcome.report.history[k].j << ',' << fmt16(a) << ',' << fmt16(b) << ','
            << fmt16(std::abs(a - b) / a) << '\n';
      }
    }
  }

  try {
    flush_rows();
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_name(e) << ": " << e.what() << '\n';
    return 4;
  }
  return 0;
}

}  // namespace lyapkit
