#pragma once

#include "telegame/analysis.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace telegame::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kInvalidInput = 2,
  kIoFailure = 3,
  kSolverFailure = 4,
  kStatisticalFailure = 5,
};

inline constexpr const char* kSweepHeader = "alpha,f_tr,f_ab,f_ac,f_coop";

// 12 significant digits in %g style, independent of the global locale.
std::string format_number(double value);

// Header line plus one LF-terminated line per row.
std::string format_sweep_csv(std::span<const SweepRow> rows);

// Entry point behind main(); args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace telegame::cli
