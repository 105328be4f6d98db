// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mgsched/config.hpp"
#include "mgsched/dispatch.hpp"
#include "mgsched/errors.hpp"
#include "mgsched/instances.hpp"
#include "mgsched/lower_bound.hpp"
#include "mgsched/oracle.hpp"
#include "mgsched/queues.hpp"
#include "mgsched/random.hpp"
#include "mgsched/simulator.hpp"
#include "mgsched/traces.hpp"
#include "mgsched_cli/commands.hpp"
#include "fixtures.hpp"

namespace mgsched {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string config_path(const char* name) { return std::string(MGSCHED_CONFIG_DIR) + "/" + name; }

// Criteria 1, 2 and part of 4 share the same 100 randomized runs.
struct RandomizedRuns {
  int configs = 0;
  std::int64_t slots = 0;
  std::int64_t band_exits = 0;
  std::int64_t queue_bound = 0;
  std::int64_t outage_window = 0;
  std::int64_t lemma = 0;
  std::string first;
  double seconds = 0.0;
};

RandomizedRuns randomized_runs() {
  RandomizedRuns out;
  const auto start = Clock::now();
  auto rng = make_rng(2024, 3);
  InstanceLimits limits;  // K <= 5, N <= 20, T = 5000
  for (int i = 0; i < 100; ++i) {
    const RunConfig cfg = random_run_config(rng, limits);
    const auto traces = generate_traces(cfg);
    RunOptions options;
    options.clamp_headroom = false;  // expose the raw policy to the energy band
    ++out.configs;
    try {
      const RunResult r = run(cfg, traces, options);
      const MonitorCounters& v = r.summary.violations;
      out.slots += r.summary.slots;
      out.band_exits += v.battery_band;
      out.queue_bound += v.queue_bound;
      out.outage_window += v.outage_window;
      out.lemma += v.lemma + v.balance + v.exclusivity;
      if (out.first.empty() && !r.summary.first_violation.empty()) {
        out.first = fmt::format("config {}: {}", i, r.summary.first_violation);
      }
    } catch (const BoundViolation& e) {
      ++out.band_exits;
      if (out.first.empty()) out.first = fmt::format("config {}: {}", i, e.what());
    }
  }
  out.seconds = seconds_since(start);
  return out;
}

Outcome criterion_1(const RandomizedRuns& r) {
  return {r.band_exits == 0 && r.seconds < 60.0,
          fmt::format("{} configs, {} slots, {} battery-band exits, {:.1f} s{}", r.configs, r.slots, r.band_exits,
                      r.seconds, r.first.empty() ? "" : "; first: " + r.first)};
}

Outcome criterion_2(const RandomizedRuns& r) {
  return {r.queue_bound == 0 && r.outage_window == 0,
          fmt::format("{} queue-bound and {} 500-slot window violations over {} slots", r.queue_bound,
                      r.outage_window, r.slots)};
}

Outcome criterion_3() {
  const auto start = Clock::now();
  auto rng = make_rng(2024, 4);
  InstanceLimits limits;
  limits.max_batteries = kOracleMaxBatteries;
  limits.max_residents = kOracleMaxResidents;
  limits.horizon = 1;
  limits.energy_scale = 0.3;
  constexpr double step = 0.05;
  int above = 0;
  int below = 0;
  int infeasible = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 500; ++i) {
    const RunConfig cfg = random_run_config(rng, limits);
    const double v = cfg.v();
    const SystemState s = random_state(rng, cfg.microgrid, v);
    const SlotObservation obs = random_observation(rng, cfg);
    const Dispatch d = dispatch_slot(s, obs, cfg.microgrid, v);
    if (!check_dispatch(d, obs, cfg.microgrid).empty()) ++infeasible;
    const auto ref = oracle_solve(s, obs, cfg.microgrid, v, step);
    double upper = std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    for (const OracleResult& m : ref) {
      if (!m.feasible) continue;
      upper = std::min(upper, m.objective);
      lower = std::min(lower, m.objective - step * m.coefficient_mass);
    }
    if (d.objective > upper + 1e-9 * std::max(1.0, std::abs(upper))) ++above;
    if (d.objective < lower) ++below;
    worst_gap = std::max(worst_gap, upper - d.objective);
  }
  const double secs = seconds_since(start);
  return {above == 0 && below == 0 && infeasible == 0 && secs < 120.0,
          fmt::format("500 instances: {} above oracle, {} below oracle bound, {} infeasible, largest oracle gap {:.4g}, "
                      "{:.1f} s",
                      above, below, infeasible, worst_gap, secs)};
}

Outcome criterion_4(const RandomizedRuns& r) {
  // Independent slots from random states on top of the simulated trajectories.
  auto rng = make_rng(2024, 5);
  InstanceLimits limits;
  limits.horizon = 1;
  std::int64_t violations = 0;
  std::string first;
  constexpr int kSlots = 10000;
  for (int i = 0; i < kSlots; ++i) {
    const RunConfig cfg = random_run_config(rng, limits);
    const double v = cfg.v();
    const SystemState s = random_state(rng, cfg.microgrid, v);
    const SlotObservation obs = random_observation(rng, cfg);
    const Dispatch d = dispatch_slot(s, obs, cfg.microgrid, v);
    const auto problems = assert_lemma_structure(d, s, obs, cfg.microgrid, v);
    violations += static_cast<std::int64_t>(problems.size());
    if (first.empty() && !problems.empty()) first = problems.front();
  }
  const std::int64_t total = r.lemma + violations;
  return {total == 0 && r.slots + kSlots >= 10000,
          fmt::format("{} trajectory slots + {} independent slots, {} violations{}", r.slots, kSlots, total,
                      first.empty() ? "" : "; first: " + first)};
}

Outcome criterion_5() {
  const auto start = Clock::now();
  std::vector<std::string> notes;
  bool pass = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    RunConfig cfg = load_config(config_path("reference.json"));
    cfg.seed = seed;
    cfg.horizon = 5000;
    const Summary s = run(cfg, generate_traces(cfg)).summary;
    const double worst = *std::max_element(s.outage_ratio.begin(), s.outage_ratio.end());
    const double best = *std::min_element(s.outage_ratio.begin(), s.outage_ratio.end());
    const std::int64_t settle = *std::max_element(s.convergence_slot.begin(), s.convergence_slot.end());
    const bool never = std::any_of(s.convergence_slot.begin(), s.convergence_slot.end(),
                                   [](std::int64_t c) { return c < 0; });
    pass = pass && best >= 0.0 && worst <= 0.10 && !never && settle <= 2000;
    notes.push_back(fmt::format("seed {}: ratios [{:.4f}, {:.4f}], settled by slot {}", seed, best, worst,
                                never ? std::string("never") : std::to_string(settle)));
  }
  const double secs = seconds_since(start);
  pass = pass && secs < 30.0;
  std::string detail;
  for (const auto& n : notes) detail += n + "; ";
  return {pass, detail + fmt::format("{:.1f} s", secs)};
}

Outcome criterion_6() {
  const auto start = Clock::now();
  RunConfig cfg = load_config(config_path("reference.json"));
  const auto traces = generate_traces(cfg);
  std::vector<Summary> runs;
  for (double f : {1.0, 0.5, 0.25}) {
    cfg.v_fraction = f;
    runs.push_back(run(cfg, traces).summary);
  }
  bool monotone = true;
  bool strict_cost = false;
  bool strict_outage = false;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    // runs[i] has the smaller V: cost may only rise, outage may only fall.
    monotone = monotone && runs[i].total_cost >= runs[i - 1].total_cost &&
               runs[i].mean_outage_ratio <= runs[i - 1].mean_outage_ratio;
    strict_cost = strict_cost || runs[i].total_cost > runs[i - 1].total_cost;
    strict_outage = strict_outage || runs[i].mean_outage_ratio < runs[i - 1].mean_outage_ratio;
  }
  const double secs = seconds_since(start);
  return {monotone && strict_cost && strict_outage && secs < 60.0,
          fmt::format("V_max, V_max/2, V_max/4: cost {:.2f} / {:.2f} / {:.2f} $, outage {:.4f} / {:.4f} / {:.4f}, "
                      "{:.1f} s",
                      runs[0].total_cost, runs[1].total_cost, runs[2].total_cost, runs[0].mean_outage_ratio,
                      runs[1].mean_outage_ratio, runs[2].mean_outage_ratio, secs)};
}

Outcome criterion_7() {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    RunConfig cfg = load_config(config_path("reference.json"));
    cfg.seed = seed;
    cfg.horizon = 10000;
    const auto traces = generate_traces(cfg);
    const Summary s = run(cfg, traces).summary;
    const LowerBoundResult lb = hindsight_lower_bound(traces, cfg.microgrid, 100);
    const double gap = s.bounds.b_star / s.v;
    const double limit = lb.best + gap + 0.05 * std::max(1.0, std::abs(lb.best));
    pass = pass && s.mean_cost <= limit;
    detail += fmt::format("seed {}: online {:.4f} <= LB {:.4f} + B*/V {:.4f} + slack; ", seed, s.mean_cost, lb.best,
                          gap);
  }
  const double secs = seconds_since(start);
  return {pass && secs < 300.0, detail + fmt::format("{:.1f} s", secs)};
}

Outcome criterion_8() {
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    RunConfig cfg = load_config(config_path("two_regime.json"));
    cfg.seed = seed;
    const auto traces = generate_traces(cfg);
    cfg.policy = Policy::kProposed;
    const Summary proposed = run(cfg, traces).summary;
    cfg.policy = Policy::kMecp;
    const Summary mecp = run(cfg, traces).summary;
    pass = pass && proposed.total_cost < mecp.total_cost;
    detail += fmt::format("seed {}: proposed {:.2f} $ vs benchmark {:.2f} $; ", seed, proposed.total_cost,
                          mecp.total_cost);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome criterion_9() {
  const auto dir = testing::scratch_dir("acceptance_determinism");
  std::ostringstream sink;
  cli::RunArgs args;
  args.config = config_path("reference.json");
  args.out = (dir / "first").string();
  const int a = cli::cmd_run(args, sink, sink);
  args.out = (dir / "second").string();
  const int b = cli::cmd_run(args, sink, sink);
  const bool csv_same = testing::read_file(dir / "first.slots.csv") == testing::read_file(dir / "second.slots.csv");
  const bool summary_same =
      testing::read_file(dir / "first.summary.txt") == testing::read_file(dir / "second.summary.txt");
  return {a == cli::kExitOk && b == cli::kExitOk && csv_same && summary_same,
          fmt::format("exit codes {} and {}, slot CSV {}, summary {}", a, b, csv_same ? "identical" : "differs",
                      summary_same ? "identical" : "differs")};
}

}  // namespace
}  // namespace mgsched

int main() {
  using mgsched::Outcome;
  const auto runs = mgsched::randomized_runs();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"battery band over 100 randomized configs", [&] { return mgsched::criterion_1(runs); }},
      {"queue bound and windowed outage", [&] { return mgsched::criterion_2(runs); }},
      {"merit order against the grid oracle", mgsched::criterion_3},
      {"lemma structure", [&] { return mgsched::criterion_4(runs); }},
      {"outage convergence", mgsched::criterion_5},
      {"cost/outage trade-off in V", mgsched::criterion_6},
      {"gap to the hindsight lower bound", mgsched::criterion_7},
      {"ordering against the heuristic benchmark", mgsched::criterion_8},
      {"byte-identical reruns", mgsched::criterion_9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
