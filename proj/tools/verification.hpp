#pragma once

// The release gate shared by `telegame verify` and the acceptance test binary:
// closed forms, exact pipeline averages, Monte-Carlo estimates and CLI
// artifacts are cross-checked at fixed tolerances.

#include "telegame/protocols.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace telegame::cli {

struct CheckResult {
  // 1-9 for acceptance criteria, 0 for supplementary checks.
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  ShiftRule shift = modified_shift;
  std::size_t mc_shots = 100000;
  std::uint64_t mc_seed = 20240601;
  std::size_t determinism_shots = 50000;
  bool include_monte_carlo = true;
  bool include_cli_artifacts = true;
};

std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace telegame::cli
