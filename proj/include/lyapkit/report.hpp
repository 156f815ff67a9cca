#pragma once

#include <string>
#include <vector>

#include "lyapkit/linops.hpp"

namespace lyapkit {

enum class SolveStatus { Converged, MaxIterReached, MaxSpaceReached };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterReached: return "max_iter_reached";
    case SolveStatus::MaxSpaceReached: return "max_space_reached";
  }
  return "unknown";
}

struct IterRecord {
  int j = 0;              // ADI iteration index (shift applications consumed)
  int m_blocks = 0;       // Krylov blocks in use (0 for explicit methods)
  int space_dim = 0;      // 2q * m_blocks, or 0 for explicit methods
  double resnorm_abs = 0.0;
  double resnorm_rel = 0.0;
  Complex shift{0.0, 0.0};
  double eps_inn = 0.0;   // inner tolerance in force (0 when not applicable)
};

struct SolveReport {
  std::string method;
  SolveStatus status = SolveStatus::Converged;
  std::vector<IterRecord> history;
  int iterations = 0;
  int space_dim = 0;
  int factor_cols = 0;
  double final_resnorm_rel = 0.0;
  double wall_time_s = 0.0;
};

}  // namespace lyapkit
