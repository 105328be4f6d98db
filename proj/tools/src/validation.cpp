#include "mgsched_cli/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mgsched/dispatch.hpp"
#include "mgsched/errors.hpp"
#include "mgsched/instances.hpp"
#include "mgsched/oracle.hpp"
#include "mgsched/queues.hpp"
#include "mgsched/random.hpp"
#include "mgsched/traces.hpp"

namespace mgsched::cli {

namespace {

inline constexpr std::uint64_t kValidationStream = 2;
inline constexpr double kTolerance = 1e-9;

std::string describe(const SystemState& state, const SlotObservation& obs, const Dispatch& d, double v) {
  return fmt::format(
      "  V = {}\n  state: t = {}, e = [{}], z = [{}]\n"
      "  observation: u = {}, basic = [{}], alpha = [{}], c = {}, w = {}\n"
      "  dispatch: q = {}, s = {}, r = [{}], d = [{}], p = [{}], curtailed = {}",
      v, state.t, fmt::join(state.e, ", "), fmt::join(state.z, ", "), obs.u, fmt::join(obs.basic, ", "),
      fmt::join(obs.alpha, ", "), obs.c, obs.w, d.q, d.s, fmt::join(d.r, ", "), fmt::join(d.d, ", "),
      fmt::join(d.p, ", "), d.curtailed);
}

SuiteResult named_suite(std::string name) {
  SuiteResult s;
  s.name = std::move(name);
  return s;
}

void fail(SuiteResult& suite, const std::string& what, const std::string& context) {
  ++suite.failures;
  if (suite.counterexample.empty()) suite.counterexample = what + "\n" + context;
}

}  // namespace

std::vector<SuiteResult> run_validation(const RunConfig& config, const ValidationOptions& options) {
  if (options.trials < 1) throw InputError("validate: trials must be at least 1");
  if (!(options.v_scale > 0.0)) throw InputError("validate: v_scale must be positive");
  config.validate();

  SuiteResult band = named_suite("battery band");
  SuiteResult queue = named_suite("queue bound");
  SuiteResult lemma = named_suite("lemma structure");
  SuiteResult feasible = named_suite("dispatch feasibility");
  SuiteResult oracle = named_suite("solver vs oracle");

  auto rng = make_rng(options.seed, kValidationStream);
  for (int trial = 0; trial < options.trials; ++trial) {
    RunConfig cfg = config;
    cfg.seed = rng();
    cfg.horizon = std::min(config.horizon, options.slots_per_trial);
    cfg.v_scale = options.v_scale;
    const Microgrid& mg = cfg.microgrid;
    const double v = cfg.v();
    const BoundConstants bounds = bound_constants(mg, v);
    const std::vector<SlotObservation> traces = generate_traces(cfg);

    DispatchOptions dopt;
    dopt.curtail = cfg.curtail;
    dopt.clamp_headroom = false;
    SystemState state = random_state(rng, mg, v);
    for (const SlotObservation& obs : traces) {
      const Dispatch d = dispatch_slot(state, obs, mg, v, dopt);

      ++feasible.checks;
      for (const std::string& problem : check_dispatch(d, obs, mg)) fail(feasible, problem, describe(state, obs, d, v));
      ++lemma.checks;
      for (const std::string& problem : assert_lemma_structure(d, state, obs, mg, v)) {
        fail(lemma, problem, describe(state, obs, d, v));
      }

      SystemState next = state;
      ++next.t;
      for (std::size_t k = 0; k < mg.num_batteries(); ++k) {
        const BatterySpec& b = mg.batteries[k];
        const double e = state.e[k] + d.r[k] - d.d[k];
        ++band.checks;
        if (e < b.e_min - kTolerance || e > b.e_max + kTolerance) {
          fail(band, fmt::format("battery {} energy {} leaves [{}, {}]", k, e, b.e_min, b.e_max),
               describe(state, obs, d, v));
        }
        next.e[k] = std::clamp(e, b.e_min, b.e_max);
      }
      for (std::size_t n = 0; n < mg.num_residents(); ++n) {
        const double p = std::min(d.p[n], obs.alpha[n]);
        next.z[n] = update_qose_queue(state.z[n], obs.alpha[n], p, mg.residents[n].delta);
        ++queue.checks;
        if (next.z[n] > bounds.z_max[n] + kTolerance) {
          fail(queue, fmt::format("resident {} queue {} exceeds {}", n, next.z[n], bounds.z_max[n]),
               describe(state, obs, d, v));
        }
      }
      state = std::move(next);
    }

    for (int i = 0; i < options.oracle_instances_per_trial; ++i) {
      InstanceLimits small;
      small.max_batteries = kOracleMaxBatteries;
      small.max_residents = kOracleMaxResidents;
      small.horizon = 1;
      small.energy_scale = 0.3;
      RunConfig inst = random_run_config(rng, small);
      inst.v_scale = options.v_scale;
      const double iv = inst.v();
      const SystemState s = random_state(rng, inst.microgrid, iv);
      const SlotObservation obs = random_observation(rng, inst);
      const Dispatch d = dispatch_slot(s, obs, inst.microgrid, iv);
      const auto ref = oracle_solve(s, obs, inst.microgrid, iv, options.oracle_grid_step);

      ++oracle.checks;
      double upper = std::numeric_limits<double>::infinity();
      double lower = std::numeric_limits<double>::infinity();
      for (const OracleResult& r : ref) {
        if (!r.feasible) continue;
        upper = std::min(upper, r.objective);
        lower = std::min(lower, r.objective - options.oracle_grid_step * r.coefficient_mass);
      }
      const double slack = kTolerance * std::max(1.0, std::abs(upper));
      const auto problems = check_dispatch(d, obs, inst.microgrid);
      if (!problems.empty()) {
        fail(oracle, "merit-order dispatch infeasible: " + problems.front(), describe(s, obs, d, iv));
      } else if (!(d.objective <= upper + slack)) {
        fail(oracle, fmt::format("merit-order objective {} above oracle {}", d.objective, upper),
             describe(s, obs, d, iv));
      } else if (!(d.objective >= lower - slack)) {
        fail(oracle, fmt::format("merit-order objective {} below oracle bound {}", d.objective, lower),
             describe(s, obs, d, iv));
      }
    }
  }
  return {band, queue, lemma, feasible, oracle};
}

}  // namespace mgsched::cli
