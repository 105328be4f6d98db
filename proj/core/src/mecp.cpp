#include "mgsched/mecp.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mgsched/errors.hpp"
#include "mgsched/random.hpp"

namespace mgsched {

void MecpParams::validate() const {
  if (!(block_prob >= 0.0 && block_prob <= 1.0) || !(charge_prob >= 0.0 && charge_prob <= 1.0)) {
    throw InputError(fmt::format("mecp: probabilities must lie in [0, 1] (block {}, charge {})", block_prob,
                                 charge_prob));
  }
}

Dispatch mecp_dispatch(const SystemState& state, const SlotObservation& obs, const Microgrid& mg,
                       std::mt19937_64& rng, const MecpParams& params) {
  params.validate();
  const std::size_t k_count = mg.num_batteries();
  const std::size_t n_count = mg.num_residents();
  Dispatch d;
  d.r.assign(k_count, 0.0);
  d.d.assign(k_count, 0.0);
  d.p.assign(n_count, 0.0);

  double demand = 0.0;
  for (std::size_t n = 0; n < n_count; ++n) {
    const bool blocked = uniform01(rng) < params.block_prob;
    if (!blocked) {
      d.p[n] = obs.alpha[n];
      demand += obs.alpha[n];
    }
  }
  const bool charge_coin = uniform01(rng) < params.charge_prob;

  const double surplus = surplus_power(obs);
  if (surplus >= demand) {
    double excess = surplus - demand;
    for (std::size_t k = 0; k < k_count && excess > 0.0; ++k) {
      const BatterySpec& b = mg.batteries[k];
      const double room = std::clamp(b.e_max - state.e[k], 0.0, b.r_max);
      d.r[k] = std::min(room, excess);
      excess -= d.r[k];
    }
    d.s = std::min(excess, mg.grid.s_max);
    excess -= d.s;
    if (excess > 0.0) {
      if (!params.curtail) {
        throw UnservableSurplus(fmt::format("mecp: {} kWh of surplus has no sink", excess));
      }
      d.curtailed = excess;
    }
  } else {
    double shortfall = demand - surplus;
    for (std::size_t k = 0; k < k_count && shortfall > 0.0; ++k) {
      const BatterySpec& b = mg.batteries[k];
      const double avail = std::clamp(state.e[k] - b.e_min, 0.0, b.d_max);
      d.d[k] = std::min(avail, shortfall);
      shortfall -= d.d[k];
    }
    d.q = std::min(shortfall, mg.grid.q_max);
    shortfall -= d.q;
    // Purchase limit reached: withdraw service from the last residents first.
    for (std::size_t n = n_count; n-- > 0 && shortfall > 0.0;) {
      const double cut = std::min(d.p[n], shortfall);
      d.p[n] -= cut;
      shortfall -= cut;
    }
  }

  // Opportunistic charging purchase, never while selling and never into a
  // battery that discharged this slot.
  if (charge_coin && d.s == 0.0) {
    double budget = mg.grid.q_max - d.q;
    for (std::size_t k = 0; k < k_count && budget > 0.0; ++k) {
      if (d.d[k] > 0.0) continue;
      const BatterySpec& b = mg.batteries[k];
      const double room = std::max(0.0, std::min(b.r_max - d.r[k], b.e_max - state.e[k] - d.r[k]));
      const double extra = std::min(room, budget);
      d.r[k] += extra;
      d.q += extra;
      budget -= extra;
    }
  }
  return d;
}

}  // namespace mgsched
