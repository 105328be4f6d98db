#include "mgsched/instances.hpp"

#include <algorithm>
#include <cmath>

#include "mgsched/queues.hpp"
#include "mgsched/random.hpp"
#include "mgsched/traces.hpp"

namespace mgsched {

namespace {

std::size_t pick_count(std::mt19937_64& rng, std::size_t max) {
  const auto n = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(max)) + 1;
  return std::min(n, max);
}

}  // namespace

RunConfig random_run_config(std::mt19937_64& rng, const InstanceLimits& limits) {
  RunConfig cfg;
  cfg.horizon = limits.horizon;
  cfg.seed = rng();
  cfg.v_fraction = 1.0;
  Microgrid& mg = cfg.microgrid;
  const double scale = limits.energy_scale;

  const std::size_t k_count = pick_count(rng, limits.max_batteries);
  for (std::size_t k = 0; k < k_count; ++k) {
    BatterySpec b;
    b.e_min = uniform(rng, 0.0, 2.0);
    b.r_max = scale * uniform(rng, 0.25, 3.0);
    b.d_max = scale * uniform(rng, 0.25, 3.0);
    b.e_max = b.e_min + b.r_max + b.d_max + scale * uniform(rng, 0.5, 20.0);
    b.e_init = uniform(rng, b.e_min, b.e_max);
    mg.batteries.push_back(b);
  }

  const std::size_t n_count = pick_count(rng, limits.max_residents);
  double sum_alpha = 0.0;
  for (std::size_t n = 0; n < n_count; ++n) {
    ResidentSpec r;
    r.delta = uniform(rng, 0.02, 0.2);
    r.alpha_max = scale * uniform(rng, 0.25, 4.0);
    r.quality_mean = r.alpha_max / 2.0;
    r.basic_lo = uniform(rng, 0.0, 2.0);
    r.basic_hi = r.basic_lo + scale * uniform(rng, 0.0, 5.0);
    sum_alpha += r.alpha_max;
    mg.residents.push_back(r);
  }

  GridSpec& g = mg.grid;
  g.w_min = uniform(rng, 0.0, 0.04);
  g.c_min = g.w_min + uniform(rng, 0.0, 0.04);
  g.c_max = g.c_min + uniform(rng, 0.02, 0.15);
  g.w_max = std::min(g.c_max, uniform(rng, g.w_min, g.c_max) + 0.005);

  TraceModel& t = cfg.traces;
  const double per_res = static_cast<double>(n_count);
  t.surplus_lo = 0.0;
  t.surplus_hi = scale * uniform(rng, 0.2, 3.0) * per_res;
  t.burst_prob = uniform(rng, 0.0, 0.1);
  t.burst_lo = scale * uniform(rng, 0.0, 3.0) * per_res;
  t.burst_hi = t.burst_lo + scale * uniform(rng, 0.0, 5.0) * per_res;

  double sum_r = 0.0;
  double sum_d = 0.0;
  for (const auto& b : mg.batteries) {
    sum_r += b.r_max;
    sum_d += b.d_max;
  }
  g.q_max = 2.0 * (sum_alpha + sum_r);
  g.s_max = 2.0 * (t.surplus_hi + t.burst_hi + sum_d);

  cfg.mecp.block_prob = mg.residents.front().delta;
  cfg.validate();
  return cfg;
}

SystemState random_state(std::mt19937_64& rng, const Microgrid& mg, double v) {
  SystemState s = SystemState::initial(mg);
  const BoundConstants bounds = bound_constants(mg, v);
  for (std::size_t k = 0; k < mg.num_batteries(); ++k) {
    s.e[k] = uniform(rng, mg.batteries[k].e_min, mg.batteries[k].e_max);
  }
  for (std::size_t n = 0; n < mg.num_residents(); ++n) s.z[n] = uniform(rng, 0.0, bounds.z_max[n]);
  return s;
}

SlotObservation random_observation(std::mt19937_64& rng, const RunConfig& config) {
  RunConfig one = config;
  one.horizon = 1;
  one.traces.regimes.clear();
  return generate_traces(one, rng).front();
}

}  // namespace mgsched
