#pragma once

// Slot-by-slot execution of a policy over a trace, with every deterministic
// guarantee of the controller checked as it runs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgsched/config.hpp"
#include "mgsched/model.hpp"
#include "mgsched/queues.hpp"

namespace mgsched {

struct SlotRecord {
  std::int64_t t = 0;
  Dispatch dispatch;
  double cost_increment = 0.0;  // q*c - s*w
  double cumulative_cost = 0.0;
  std::vector<double> e;       // battery energies after the slot
  std::vector<double> z;       // QoSE queues after the slot
  std::vector<double> outage;  // alpha - p
};

struct MonitorCounters {
  std::int64_t battery_band = 0;     // energy outside its band, or headroom clamp engaged
  std::int64_t queue_bound = 0;      // Z above V*c_max + alpha_max
  std::int64_t outage_window = 0;    // windowed outage above z_max + T'*delta*alpha_max
  std::int64_t balance = 0;
  std::int64_t exclusivity = 0;
  std::int64_t lemma = 0;

  std::int64_t total() const {
    return battery_band + queue_bound + outage_window + balance + exclusivity + lemma;
  }
};

struct Summary {
  Policy policy = Policy::kProposed;
  std::int64_t slots = 0;
  double v = 0.0;
  double v_max = 0.0;
  BoundConstants bounds;
  double total_cost = 0.0;
  double mean_cost = 0.0;  // total_cost / slots
  std::vector<double> outage_ratio;
  double mean_outage_ratio = 0.0;
  std::vector<double> quality_mean;
  std::vector<bool> qose_stable;
  // First slot from which the running outage ratio stays at or below
  // delta + tolerance; -1 if it never settles.
  std::vector<std::int64_t> convergence_slot;
  double convergence_tolerance = 0.0;
  double curtailed_kwh = 0.0;
  // Policy-specific monitors (queue bound, outage window, lemma structure)
  // only apply to the drift-plus-penalty controller.
  bool policy_monitors = true;
  MonitorCounters violations;
  std::string first_violation;
};

struct RunResult {
  std::vector<SlotRecord> records;
  Summary summary;
};

struct RunOptions {
  bool clamp_headroom = true;
  // Optional empirical quality means for ingested traces; when empty the
  // configured means are reported.
  std::vector<double> quality_mean;
};

RunResult run(const RunConfig& config, std::span<const SlotObservation> traces, const RunOptions& options = {});

// Recomputes the cumulative cost from the dispatch stream and prices.
std::vector<double> replay_cumulative_cost(std::span<const SlotRecord> records,
                                           std::span<const SlotObservation> traces);

}  // namespace mgsched
