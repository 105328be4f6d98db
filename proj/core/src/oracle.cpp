#include "mgsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "mgsched/errors.hpp"
#include "mgsched/queues.hpp"

namespace mgsched {

namespace {

// Grid points in [lo, hi]: every multiple of step strictly inside plus both
// endpoints.
std::vector<double> grid_points(double lo, double hi, double step) {
  std::vector<double> pts;
  pts.push_back(lo);
  const auto first = static_cast<long long>(std::floor(lo / step)) + 1;
  for (long long i = first;; ++i) {
    const double x = static_cast<double>(i) * step;
    if (x >= hi) break;
    if (x > lo) pts.push_back(x);
  }
  if (hi > lo) pts.push_back(hi);
  return pts;
}

struct Axis {
  std::vector<double> values;
  double unit_cost = 0.0;  // objective per unit of net demand on this axis
};

struct Search {
  Mode mode;
  double surplus;
  double market_coef;  // V*C for purchase, V*W for sale
  double market_cap;
  const std::vector<Axis>* axes;
  std::vector<std::size_t> pick;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_pick;
  double best_market = 0.0;

  void run(std::size_t level, double demand, double objective) {
    const auto& ax = *axes;
    if (level == ax.size()) {
      // Net demand of sinks minus battery discharge must be covered by the
      // surplus plus purchase, or leave a remainder to sell.
      double market = 0.0;
      double value = objective;
      constexpr double tol = 1e-12;
      if (mode == Mode::kPurchase) {
        market = demand - surplus;
        if (market < -tol || market > market_cap + tol) return;
        market = std::clamp(market, 0.0, market_cap);
        value += market_coef * market;
      } else {
        market = surplus - demand;
        if (market < -tol || market > market_cap + tol) return;
        market = std::clamp(market, 0.0, market_cap);
        value -= market_coef * market;
      }
      if (value < best) {
        best = value;
        best_pick = pick;
        best_market = market;
      }
      return;
    }
    const Axis& axis = ax[level];
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      pick[level] = i;
      run(level + 1, demand + axis.values[i], objective + axis.unit_cost * axis.values[i]);
    }
  }
};

}  // namespace

std::array<OracleResult, 2> oracle_solve(const SystemState& state, const SlotObservation& obs,
                                         const Microgrid& mg, double v, double grid_step,
                                         bool clamp_headroom) {
  const std::size_t k_count = mg.num_batteries();
  const std::size_t n_count = mg.num_residents();
  if (k_count > kOracleMaxBatteries || n_count > kOracleMaxResidents) {
    throw InputError(fmt::format("oracle_solve: at most {} batteries and {} residents (got {}, {})",
                                 kOracleMaxBatteries, kOracleMaxResidents, k_count, n_count));
  }
  if (!(grid_step > 0.0)) throw InputError("oracle_solve: grid_step must be positive");

  const double surplus = obs.u - std::accumulate(obs.basic.begin(), obs.basic.end(), 0.0);

  // Axis k: net charge R_k - D_k in [-discharge limit, recharge limit]. A
  // single signed axis makes R_k * D_k = 0 automatic. Cost per unit: X_k.
  // Axis K + n: quality service in [0, alpha_n]. Cost per unit: -(Z_n + alpha_n).
  std::vector<Axis> axes;
  double battery_mass = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    const BatterySpec& b = mg.batteries[k];
    double up = b.r_max;
    double down = b.d_max;
    if (clamp_headroom) {
      up = std::clamp(b.e_max - state.e[k], 0.0, b.r_max);
      down = std::clamp(state.e[k] - b.e_min, 0.0, b.d_max);
    }
    const double x = state.e[k] - b.d_max - b.e_min - v * mg.grid.c_max;
    axes.push_back({grid_points(-down, up, grid_step), x});
    battery_mass += 2.0 * std::abs(x);
  }
  double quality_mass = 0.0;
  for (std::size_t n = 0; n < n_count; ++n) {
    const double value = state.z[n] + obs.alpha[n];
    axes.push_back({grid_points(0.0, obs.alpha[n], grid_step), -value});
    quality_mass += std::abs(value);
  }

  std::array<OracleResult, 2> results;
  for (Mode mode : {Mode::kPurchase, Mode::kSell}) {
    Search search{mode,
                  surplus,
                  mode == Mode::kPurchase ? v * obs.c : v * obs.w,
                  mode == Mode::kPurchase ? mg.grid.q_max : mg.grid.s_max,
                  &axes,
                  std::vector<std::size_t>(axes.size(), 0)};
    search.run(0, 0.0, 0.0);

    OracleResult& res = results[mode == Mode::kPurchase ? 0 : 1];
    res.coefficient_mass = search.market_coef + battery_mass + quality_mass;
    if (search.best_pick.empty() && !axes.empty()) continue;
    if (!std::isfinite(search.best)) continue;
    res.feasible = true;
    res.objective = search.best;
    Dispatch& d = res.dispatch;
    d.r.assign(k_count, 0.0);
    d.d.assign(k_count, 0.0);
    d.p.assign(n_count, 0.0);
    for (std::size_t k = 0; k < k_count; ++k) {
      const double net = axes[k].values[search.best_pick[k]];
      if (net > 0.0) d.r[k] = net;
      if (net < 0.0) d.d[k] = -net;
    }
    for (std::size_t n = 0; n < n_count; ++n) d.p[n] = axes[k_count + n].values[search.best_pick[k_count + n]];
    if (mode == Mode::kPurchase) d.q = search.best_market;
    else d.s = search.best_market;
    d.objective = search.best;
  }
  return results;
}

}  // namespace mgsched
