#pragma once

// Random problem instances for the invariant suites and property tests.
// Every generated microgrid keeps its market limits non-binding, which is
// the regime in which the dispatch structure results hold.

#include <cstddef>
#include <cstdint>
#include <random>

#include "mgsched/config.hpp"
#include "mgsched/model.hpp"

namespace mgsched {

struct InstanceLimits {
  std::size_t max_batteries = 5;
  std::size_t max_residents = 20;
  std::int64_t horizon = 5000;
  // Multiplies every per-slot energy range (battery rates, requests and
  // surplus). Small values keep brute-force references cheap.
  double energy_scale = 1.0;
};

// A complete run configuration with randomized battery, resident, price and
// surplus parameters. V defaults to V_max.
RunConfig random_run_config(std::mt19937_64& rng, const InstanceLimits& limits);

// Battery energies uniform on [e_min, e_max] and QoSE queues uniform on
// [0, z_max] for the given V.
SystemState random_state(std::mt19937_64& rng, const Microgrid& mg, double v);

// One observation with the same distribution as the synthetic generator.
SlotObservation random_observation(std::mt19937_64& rng, const RunConfig& config);

}  // namespace mgsched
