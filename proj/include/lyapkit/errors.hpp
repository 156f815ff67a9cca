#pragma once

#include <stdexcept>
#include <string>

namespace lyapkit {

struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

struct SingularProjectedSystem : std::runtime_error {
  explicit SingularProjectedSystem(const std::string& what) : std::runtime_error(what) {}
};

struct RankDeficientLS : std::runtime_error {
  explicit RankDeficientLS(const std::string& what) : std::runtime_error(what) {}
};

struct EigFailure : std::runtime_error {
  explicit EigFailure(const std::string& what) : std::runtime_error(what) {}
};

// Rank-deficient Krylov block; deflation is not supported.
struct BreakdownError : std::runtime_error {
  explicit BreakdownError(const std::string& what) : std::runtime_error(what) {}
};

struct NoStableShift : std::runtime_error {
  explicit NoStableShift(const std::string& what) : std::runtime_error(what) {}
};

struct NotSPD : std::runtime_error {
  explicit NotSPD(const std::string& what) : std::runtime_error(what) {}
};

struct IOError : std::runtime_error {
  explicit IOError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lyapkit
