#pragma once

#include "balint/harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace balint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitVerifyFailed = 3;

/// Solves the intercept of a single-scenario config and prints
/// "beta0,method,residual,mc_se,warnings" plus one row.
int cmd_solve(const GridConfig& config, std::ostream& out, std::ostream& err);

/// Evaluates E[g^{-1}(beta0 + eta)] for a single-scenario config on a fresh
/// stream. Without beta0 the configured solver supplies it. Exit 0 iff the
/// gap to the target is <= max(tol, 4 se).
int cmd_verify(const GridConfig& config, std::optional<double> beta0, std::ostream& out,
               std::ostream& err);

/// Runs the grid, writes the result CSV to out_path and a summary to err.
int cmd_simulate(const GridConfig& config, const std::filesystem::path& out_path,
                 std::ostream& err);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace balint::cli
