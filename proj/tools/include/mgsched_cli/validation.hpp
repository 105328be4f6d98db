#pragma once

// Randomized invariant suites behind `mgsched validate`.

#include <cstdint>
#include <string>
#include <vector>

#include "mgsched/config.hpp"

namespace mgsched::cli {

struct SuiteResult {
  std::string name;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  std::string counterexample;  // first failure, empty if none

  bool passed() const { return failures == 0; }
};

struct ValidationOptions {
  int trials = 100;
  std::uint64_t seed = 1;
  // Multiplies V; above one the battery band is no longer guaranteed.
  double v_scale = 1.0;
  // Slots simulated per trial; capped by the config horizon.
  std::int64_t slots_per_trial = 500;
  // Random small instances compared against the brute-force reference per trial.
  int oracle_instances_per_trial = 5;
  double oracle_grid_step = 0.05;
};

// Suites, in order: battery band (headroom clamp disabled), queue bound,
// lemma structure, dispatch feasibility, solver against oracle.
std::vector<SuiteResult> run_validation(const RunConfig& config, const ValidationOptions& options);

}  // namespace mgsched::cli
