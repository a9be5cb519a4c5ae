#pragma once

#include <ostream>

#include "sgfopt/config.hpp"

namespace sgfopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Validates the configuration completely, then creates cfg.out and runs
/// the selected pipeline. Nothing is written when validation fails.
/// Returns kExitOk, kExitSolverFailure or kExitConfigError.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace sgfopt
