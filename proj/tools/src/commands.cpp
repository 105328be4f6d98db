#include "mgsched_cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mgsched/config.hpp"
#include "mgsched/errors.hpp"
#include "mgsched/report.hpp"
#include "mgsched/simulator.hpp"
#include "mgsched/traces.hpp"
#include "mgsched_cli/validation.hpp"

namespace mgsched::cli {

namespace {

// Maps library exceptions onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const UnservableSurplus& e) {
    fmt::print(err, "error: {} (enable curtailment or raise the sale limit)\n", e.what());
    return kExitInput;
  } catch (const BoundViolation& e) {
    fmt::print(err, "bound violation: {}\n", e.what());
    return kExitViolation;
  }
}

void report_violations(std::ostream& err, const Summary& s) {
  const MonitorCounters& v = s.violations;
  fmt::print(err,
             "bound violations ({}): battery_band={} queue_bound={} outage_window={} balance={} "
             "exclusivity={} lemma={}\nfirst: {}\n",
             to_string(s.policy), v.battery_band, v.queue_bound, v.outage_window, v.balance, v.exclusivity,
             v.lemma, s.first_violation);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError(fmt::format("{}: cannot open for writing", path));
  return f;
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_config(args.config);
    if (args.seed) cfg.seed = *args.seed;
    if (args.curtail) cfg.curtail = true;

    const int given = !args.wind.empty() + !args.prices.empty() + !args.demand.empty();
    if (given != 0 && given != 3) throw InputError("--wind, --prices and --demand must be given together");
    RunOptions options;
    std::vector<SlotObservation> traces;
    if (given == 3) {
      TraceSet set = load_traces(args.wind, args.prices, args.demand, cfg);
      traces = std::move(set.slots);
      options.quality_mean = std::move(set.quality_mean);
    } else {
      traces = generate_traces(cfg);
    }

    const RunResult result = run(cfg, traces, options);
    const std::size_t k = cfg.microgrid.num_batteries();
    const std::size_t n = cfg.microgrid.num_residents();
    write_slot_csv(args.out + ".slots.csv", result.records, k, n);
    write_summary(args.out + ".summary.txt", result.summary);

    const Summary& s = result.summary;
    fmt::print(out, "{} policy, {} slots: total cost {:.4f} $, mean outage ratio {:.4f}\n", to_string(s.policy),
               s.slots, s.total_cost, s.mean_outage_ratio);
    if (s.violations.total() > 0) {
      report_violations(err, s);
      return kExitViolation;
    }
    return kExitOk;
  });
}

int cmd_sweep_v(const std::string& config, const std::vector<double>& fractions, const std::string& out_prefix,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (fractions.empty()) throw InputError("sweep-v: at least one fraction is required");
    for (double f : fractions) {
      if (!(f > 0.0 && f <= 1.0)) throw InputError(fmt::format("sweep-v: fraction {} not in (0, 1]", f));
    }
    RunConfig cfg = load_config(config);
    const std::vector<SlotObservation> traces = generate_traces(cfg);

    struct Row {
      double fraction;
      double cost;
      double outage;
    };
    std::vector<Row> rows;
    bool violated = false;
    for (double f : fractions) {
      cfg.v_fraction = f;
      const RunResult result = run(cfg, traces);
      const Summary& s = result.summary;
      if (s.violations.total() > 0) {
        report_violations(err, s);
        violated = true;
      }
      rows.push_back({f, s.total_cost, s.mean_outage_ratio});
    }

    std::ofstream csv = open_output(out_prefix + ".sweep.csv");
    fmt::print(csv, "fraction,total_cost,mean_outage_ratio\n");
    for (const Row& r : rows) fmt::print(csv, "{},{},{}\n", r.fraction, r.cost, r.outage);
    if (!csv) throw InputError(fmt::format("{}.sweep.csv: write failed", out_prefix));

    std::vector<Row> by_v = rows;
    std::stable_sort(by_v.begin(), by_v.end(), [](const Row& a, const Row& b) { return a.fraction < b.fraction; });
    bool monotone = true;
    for (std::size_t i = 1; i < by_v.size(); ++i) {
      monotone = monotone && by_v[i].cost <= by_v[i - 1].cost && by_v[i].outage >= by_v[i - 1].outage;
    }
    for (const Row& r : rows) {
      fmt::print(out, "V = {:.3f} V_max: total cost {:.4f} $, mean outage ratio {:.4f}\n", r.fraction, r.cost,
                 r.outage);
    }
    if (!monotone) fmt::print(err, "trade-off not monotone in V\n");
    return violated || !monotone ? kExitViolation : kExitOk;
  });
}

int cmd_compare(const std::string& config, const std::string& out_prefix, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_config(config);
    const std::vector<SlotObservation> traces = generate_traces(cfg);

    cfg.policy = Policy::kProposed;
    const Summary proposed = run(cfg, traces).summary;
    cfg.policy = Policy::kMecp;
    const Summary mecp = run(cfg, traces).summary;
    write_summary(out_prefix + ".proposed.summary.txt", proposed);
    write_summary(out_prefix + ".mecp.summary.txt", mecp);

    fmt::print(out, "proposed: total cost {:.4f} $, mean outage ratio {:.4f}\n", proposed.total_cost,
               proposed.mean_outage_ratio);
    fmt::print(out, "mecp:     total cost {:.4f} $, mean outage ratio {:.4f}\n", mecp.total_cost,
               mecp.mean_outage_ratio);
    bool violated = false;
    for (const Summary* s : {&proposed, &mecp}) {
      if (s->violations.total() > 0) {
        report_violations(err, *s);
        violated = true;
      }
    }
    if (proposed.total_cost > mecp.total_cost) {
      fmt::print(err, "proposed cost {} exceeds benchmark cost {}\n", proposed.total_cost, mecp.total_cost);
      return kExitViolation;
    }
    return violated ? kExitViolation : kExitOk;
  });
}

int cmd_validate(const std::string& config, int trials, std::uint64_t seed, double v_scale, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    if (trials < 1) throw InputError("validate: --trials must be at least 1");
    const RunConfig cfg = load_config(config);
    ValidationOptions options;
    options.trials = trials;
    options.seed = seed;
    options.v_scale = v_scale;
    const std::vector<SuiteResult> suites = run_validation(cfg, options);

    fmt::print(out, "{:<22} {:>10} {:>10}  {}\n", "suite", "checks", "failures", "result");
    const SuiteResult* first_failure = nullptr;
    for (const SuiteResult& s : suites) {
      fmt::print(out, "{:<22} {:>10} {:>10}  {}\n", s.name, s.checks, s.failures, s.passed() ? "PASS" : "FAIL");
      if (!s.passed() && first_failure == nullptr) first_failure = &s;
    }
    if (first_failure != nullptr) {
      fmt::print(err, "first counterexample ({}):\n{}\n", first_failure->name, first_failure->counterexample);
      return kExitViolation;
    }
    return kExitOk;
  });
}

int cmd_gen_traces(const std::string& config, const std::string& out_prefix, std::optional<std::uint64_t> seed,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_config(config);
    if (seed) cfg.seed = *seed;
    const std::vector<SlotObservation> traces = generate_traces(cfg);
    write_traces(out_prefix, traces);
    fmt::print(out, "wrote {} slots to {}.wind.csv, {}.prices.csv, {}.demand.csv\n", traces.size(), out_prefix,
               out_prefix, out_prefix);
    return kExitOk;
  });
}

}  // namespace mgsched::cli
