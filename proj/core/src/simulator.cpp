#include "mgsched/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mgsched/dispatch.hpp"
#include "mgsched/errors.hpp"
#include "mgsched/mecp.hpp"
#include "mgsched/random.hpp"

namespace mgsched {

namespace {

inline constexpr std::uint64_t kPolicyStream = 1;
inline constexpr double kBoundTolerance = 1e-9;

class Monitor {
 public:
  explicit Monitor(MonitorCounters& counters, std::string& first) : counters_(counters), first_(first) {}

  void flag(std::int64_t MonitorCounters::*counter, std::int64_t t, const std::string& what) {
    ++(counters_.*counter);
    if (first_.empty()) first_ = fmt::format("slot {}: {}", t, what);
  }

 private:
  MonitorCounters& counters_;
  std::string& first_;
};

}  // namespace

RunResult run(const RunConfig& config, std::span<const SlotObservation> traces, const RunOptions& options) {
  config.validate();
  const auto horizon = static_cast<std::size_t>(config.horizon);
  if (traces.size() < horizon) {
    throw InputError(fmt::format("run: {} trace slots for a horizon of {}", traces.size(), horizon));
  }
  const Microgrid& mg = config.microgrid;
  const std::size_t k_count = mg.num_batteries();
  const std::size_t n_count = mg.num_residents();
  const bool proposed = config.policy == Policy::kProposed;

  RunResult result;
  Summary& sum = result.summary;
  sum.policy = config.policy;
  sum.slots = config.horizon;
  sum.v_max = config.v_max();
  sum.v = config.v();
  sum.bounds = bound_constants(mg, sum.v);
  sum.convergence_tolerance = config.convergence_tolerance;
  sum.policy_monitors = proposed;
  if (!options.quality_mean.empty()) {
    sum.quality_mean = options.quality_mean;
  } else {
    for (const auto& r : mg.residents) sum.quality_mean.push_back(r.quality_mean);
  }
  Monitor monitor(sum.violations, sum.first_violation);

  DispatchOptions dopt;
  dopt.curtail = config.curtail;
  dopt.clamp_headroom = options.clamp_headroom;
  MecpParams mecp = config.mecp;
  mecp.curtail = config.curtail;
  auto policy_rng = make_rng(config.seed, kPolicyStream);

  SystemState state = SystemState::initial(mg);
  std::vector<QueueBand> bands;
  for (const auto& b : mg.batteries) bands.push_back(battery_queue_band(b, sum.v, mg.grid));

  // Cumulative outage per resident, one entry per slot boundary, for the
  // sliding-window outage bound.
  const auto window = static_cast<std::size_t>(config.window_slots);
  std::vector<std::vector<double>> cum_outage(n_count, std::vector<double>(1, 0.0));
  std::vector<double> outage_sum(n_count, 0.0);
  std::vector<double> alpha_sum(n_count, 0.0);
  std::vector<std::int64_t> last_unsettled(n_count, -1);
  double cumulative = 0.0;
  result.records.reserve(horizon);

  for (std::size_t t = 0; t < horizon; ++t) {
    const SlotObservation& obs = traces[t];
    const auto slot = static_cast<std::int64_t>(t);
    try {
      obs.validate(mg);
    } catch (const InputError& e) {
      throw InputError(fmt::format("slot {}: {}", t, e.what()));
    }

    Dispatch d = proposed ? dispatch_slot(state, obs, mg, sum.v, dopt)
                          : mecp_dispatch(state, obs, mg, policy_rng, mecp);

    for (const std::string& problem : check_dispatch(d, obs, mg)) {
      const bool exclusive = problem.find("simultaneous") != std::string::npos ||
                             problem.find("recharges") != std::string::npos;
      monitor.flag(exclusive ? &MonitorCounters::exclusivity : &MonitorCounters::balance, slot, problem);
    }
    if (proposed) {
      for (const std::string& v : assert_lemma_structure(d, state, obs, mg, sum.v)) {
        monitor.flag(&MonitorCounters::lemma, slot, v);
      }
    }
    // Under 0 < V <= V_max the headroom clamp never limits the policy; a
    // dispatch that runs into it means the battery band guarantee failed.
    for (std::size_t k = 0; k < k_count; ++k) {
      const BatterySpec& b = mg.batteries[k];
      const double up = b.e_max - state.e[k];
      const double down = state.e[k] - b.e_min;
      if (proposed && up < b.r_max && d.r[k] > 0.0 && d.r[k] >= up - kBoundTolerance) {
        monitor.flag(&MonitorCounters::battery_band, slot,
                     fmt::format("battery {} recharge {} pinned at headroom {}", k, d.r[k], up));
      }
      if (proposed && down < b.d_max && d.d[k] > 0.0 && d.d[k] >= down - kBoundTolerance) {
        monitor.flag(&MonitorCounters::battery_band, slot,
                     fmt::format("battery {} discharge {} pinned at headroom {}", k, d.d[k], down));
      }
    }

    SystemState next = apply_dispatch(state, d, mg.batteries);
    for (std::size_t k = 0; k < k_count; ++k) {
      const double x = battery_queue(next.e[k], mg.batteries[k], sum.v, mg.grid);
      if (x < bands[k].lo - kBoundTolerance || x > bands[k].hi + kBoundTolerance) {
        monitor.flag(&MonitorCounters::battery_band, slot, fmt::format("battery {} queue {} outside band", k, x));
      }
    }

    SlotRecord rec;
    rec.t = slot;
    rec.outage.resize(n_count);
    for (std::size_t n = 0; n < n_count; ++n) {
      const ResidentSpec& r = mg.residents[n];
      const double served = std::min(d.p[n], obs.alpha[n]);
      next.z[n] = update_qose_queue(state.z[n], obs.alpha[n], served, r.delta);
      rec.outage[n] = obs.alpha[n] - served;
      outage_sum[n] += rec.outage[n];
      alpha_sum[n] += obs.alpha[n];
      cum_outage[n].push_back(outage_sum[n]);

      if (proposed) {
        const double z_max = sum.bounds.z_max[n];
        if (next.z[n] > z_max + kBoundTolerance) {
          monitor.flag(&MonitorCounters::queue_bound, slot,
                       fmt::format("resident {} queue {} above {}", n, next.z[n], z_max));
        }
        const std::size_t len = std::min(window, t + 1);
        const double windowed = cum_outage[n][t + 1] - cum_outage[n][t + 1 - len];
        const double limit = z_max + static_cast<double>(len) * r.delta * r.alpha_max;
        if (windowed > limit + kBoundTolerance * std::max(1.0, limit)) {
          monitor.flag(&MonitorCounters::outage_window, slot,
                       fmt::format("resident {} outage {} over {} slots exceeds {}", n, windowed, len, limit));
        }
      }

      const double ratio = alpha_sum[n] > 0.0 ? outage_sum[n] / alpha_sum[n] : 0.0;
      if (ratio > r.delta + config.convergence_tolerance) last_unsettled[n] = slot;
    }

    rec.cost_increment = d.q * obs.c - d.s * obs.w;
    cumulative += rec.cost_increment;
    rec.cumulative_cost = cumulative;
    sum.curtailed_kwh += d.curtailed;
    rec.e = next.e;
    rec.z = next.z;
    rec.dispatch = std::move(d);
    result.records.push_back(std::move(rec));
    state = std::move(next);
  }

  sum.total_cost = cumulative;
  sum.mean_cost = cumulative / static_cast<double>(horizon);
  std::vector<double> deltas;
  sum.outage_ratio.resize(n_count);
  sum.convergence_slot.resize(n_count);
  for (std::size_t n = 0; n < n_count; ++n) {
    sum.outage_ratio[n] = alpha_sum[n] > 0.0 ? outage_sum[n] / alpha_sum[n] : 0.0;
    deltas.push_back(mg.residents[n].delta);
    const std::int64_t last = last_unsettled[n];
    sum.convergence_slot[n] = last + 1 < config.horizon ? last + 1 : -1;
  }
  double total_ratio = 0.0;
  for (double r : sum.outage_ratio) total_ratio += r;
  sum.mean_outage_ratio = total_ratio / static_cast<double>(n_count);
  sum.qose_stable = check_qose_stability(outage_sum, alpha_sum, deltas, sum.bounds.z_max);
  return result;
}

std::vector<double> replay_cumulative_cost(std::span<const SlotRecord> records,
                                           std::span<const SlotObservation> traces) {
  std::vector<double> out;
  out.reserve(records.size());
  double cumulative = 0.0;
  for (const auto& rec : records) {
    const auto& obs = traces[static_cast<std::size_t>(rec.t)];
    cumulative += rec.dispatch.q * obs.c - rec.dispatch.s * obs.w;
    out.push_back(cumulative);
  }
  return out;
}

}  // namespace mgsched
