#include "mgsched/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mgsched/errors.hpp"
#include "mgsched/queues.hpp"

namespace mgsched {

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

bool no_trade(const Dispatch& d) { return d.q == 0.0 && d.s == 0.0; }

bool same_objective(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double SlotProblem::objective(const Dispatch& d) const {
  double value = purchase_cost * d.q - sale_value * d.s;
  for (std::size_t k = 0; k < battery_coef.size(); ++k) value += battery_coef[k] * (d.r[k] - d.d[k]);
  for (std::size_t n = 0; n < quality_value.size(); ++n) value -= quality_value[n] * d.p[n];
  return value;
}

double SlotProblem::sink_capacity(Mode mode) const {
  return sum(quality_cap) + sum(recharge_cap) + (mode == Mode::kSell ? sale_cap : 0.0);
}

SlotProblem make_slot_problem(const SystemState& state, const SlotObservation& obs, const Microgrid& mg,
                              double v, const DispatchOptions& options) {
  const std::size_t k_count = mg.num_batteries();
  const std::size_t n_count = mg.num_residents();
  if (state.e.size() != k_count || state.z.size() != n_count) {
    throw InputError("make_slot_problem: state dimension mismatch");
  }
  SlotProblem p;
  p.surplus = surplus_power(obs);
  p.battery_coef.resize(k_count);
  p.recharge_cap.resize(k_count);
  p.discharge_cap.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const BatterySpec& b = mg.batteries[k];
    p.battery_coef[k] = battery_queue(state.e[k], b, v, mg.grid);
    p.recharge_cap[k] = b.r_max;
    p.discharge_cap[k] = b.d_max;
    if (options.clamp_headroom) {
      p.recharge_cap[k] = std::clamp(b.e_max - state.e[k], 0.0, b.r_max);
      p.discharge_cap[k] = std::clamp(state.e[k] - b.e_min, 0.0, b.d_max);
    }
  }
  p.quality_value.resize(n_count);
  p.quality_cap.resize(n_count);
  for (std::size_t n = 0; n < n_count; ++n) {
    p.quality_value[n] = state.z[n] + obs.alpha[n];
    p.quality_cap[n] = obs.alpha[n];
  }
  p.purchase_cost = v * obs.c;
  p.purchase_cap = mg.grid.q_max;
  p.sale_value = v * obs.w;
  p.sale_cap = mg.grid.s_max;
  return p;
}

Subproblem build_subproblem(Mode mode, const SlotProblem& problem) {
  Subproblem sp;
  const std::size_t k_count = problem.battery_coef.size();
  const std::size_t n_count = problem.quality_value.size();
  sp.offers.reserve(k_count + 2);
  sp.bids.reserve(n_count + k_count + 1);

  sp.offers.push_back({OfferKind::kSurplus, -1, 0.0, problem.surplus, true});
  for (std::size_t k = 0; k < k_count; ++k) {
    sp.offers.push_back({OfferKind::kDischarge, static_cast<int>(k), -problem.battery_coef[k],
                         problem.discharge_cap[k], false});
  }
  if (mode == Mode::kPurchase) {
    sp.offers.push_back({OfferKind::kPurchase, -1, problem.purchase_cost, problem.purchase_cap, false});
  }

  for (std::size_t n = 0; n < n_count; ++n) {
    sp.bids.push_back({BidKind::kQuality, static_cast<int>(n), problem.quality_value[n], problem.quality_cap[n]});
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    sp.bids.push_back({BidKind::kRecharge, static_cast<int>(k), -problem.battery_coef[k], problem.recharge_cap[k]});
  }
  if (mode == Mode::kSell) {
    sp.bids.push_back({BidKind::kSale, -1, problem.sale_value, problem.sale_cap});
  }
  return sp;
}

SubproblemResult solve_subproblem(Mode mode, const SlotProblem& problem) {
  const Subproblem sp = build_subproblem(mode, problem);
  const Clearing clearing = merit_order_allocate(sp.offers, sp.bids);
  SubproblemResult result;
  if (!clearing.feasible) return result;

  Dispatch& d = result.dispatch;
  d.r.assign(problem.battery_coef.size(), 0.0);
  d.d.assign(problem.battery_coef.size(), 0.0);
  d.p.assign(problem.quality_value.size(), 0.0);
  for (std::size_t i = 0; i < sp.offers.size(); ++i) {
    const Offer& o = sp.offers[i];
    const double qty = std::min(clearing.offer_qty[i], o.capacity);
    if (o.kind == OfferKind::kDischarge) d.d[static_cast<std::size_t>(o.index)] = qty;
    if (o.kind == OfferKind::kPurchase) d.q = qty;
  }
  for (std::size_t j = 0; j < sp.bids.size(); ++j) {
    const Bid& b = sp.bids[j];
    const auto idx = static_cast<std::size_t>(b.index);
    // Accumulated fills can overshoot a capacity by an ulp.
    const double qty = std::min(clearing.bid_qty[j], b.capacity);
    switch (b.kind) {
      case BidKind::kQuality: d.p[idx] = qty; break;
      case BidKind::kRecharge: d.r[idx] = qty; break;
      case BidKind::kSale: d.s = qty; break;
    }
  }
  // A battery fed by the surplus and discharging elsewhere at the same unit
  // value nets out; removing the overlap keeps balance and objective.
  for (std::size_t k = 0; k < d.r.size(); ++k) {
    const double overlap = std::min(d.r[k], d.d[k]);
    if (overlap > 0.0) {
      d.r[k] -= overlap;
      d.d[k] -= overlap;
    }
  }
  d.objective = problem.objective(d);
  result.feasible = true;
  result.objective = d.objective;
  return result;
}

Dispatch solve_slot(const SlotProblem& problem, bool curtail) {
  SubproblemResult purchase = solve_subproblem(Mode::kPurchase, problem);
  SubproblemResult sell = solve_subproblem(Mode::kSell, problem);

  double curtailed = 0.0;
  if (!purchase.feasible && !sell.feasible) {
    const double capacity = problem.sink_capacity(Mode::kSell);
    if (!curtail) {
      throw UnservableSurplus(
          fmt::format("surplus {} kWh exceeds total sink capacity {} kWh", problem.surplus, capacity));
    }
    SlotProblem trimmed = problem;
    trimmed.surplus = capacity;
    curtailed = problem.surplus - capacity;
    purchase = solve_subproblem(Mode::kPurchase, trimmed);
    sell = solve_subproblem(Mode::kSell, trimmed);
    if (!sell.feasible) throw UnservableSurplus("surplus still unservable after curtailment");
  }

  Dispatch chosen;
  if (purchase.feasible && sell.feasible) {
    if (same_objective(purchase.objective, sell.objective)) {
      chosen = (!no_trade(purchase.dispatch) && no_trade(sell.dispatch)) ? sell.dispatch : purchase.dispatch;
    } else {
      chosen = purchase.objective < sell.objective ? purchase.dispatch : sell.dispatch;
    }
  } else {
    chosen = purchase.feasible ? purchase.dispatch : sell.dispatch;
  }
  chosen.curtailed = curtailed;
  return chosen;
}

Dispatch dispatch_slot(const SystemState& state, const SlotObservation& obs, const Microgrid& mg, double v,
                       const DispatchOptions& options) {
  if (!(v > 0.0)) throw InputError(fmt::format("dispatch_slot: V must be positive (got {})", v));
  return solve_slot(make_slot_problem(state, obs, mg, v, options), options.curtail);
}

std::vector<std::string> assert_lemma_structure(const Dispatch& dispatch, const SystemState& state,
                                                const SlotObservation& obs, const Microgrid& mg, double v) {
  std::vector<std::string> out;
  // Thresholds closer than this are treated as ties and exempt.
  constexpr double margin = 1e-9;
  constexpr double zero = 1e-12;
  const GridSpec& g = mg.grid;

  auto battery_rules = [&](double price, const char* label) {
    for (std::size_t k = 0; k < mg.num_batteries(); ++k) {
      const double x = battery_queue(state.e[k], mg.batteries[k], v, g);
      if (x > -v * price + margin && dispatch.r[k] > zero) {
        out.push_back(fmt::format("battery {}: X = {} > -V*{} = {} but r = {}", k, x, label, -v * price, dispatch.r[k]));
      }
      if (x < -v * price - margin && dispatch.d[k] > zero) {
        out.push_back(fmt::format("battery {}: X = {} < -V*{} = {} but d = {}", k, x, label, -v * price, dispatch.d[k]));
      }
    }
  };
  auto quality_rules = [&](double price, const char* label) {
    for (std::size_t n = 0; n < mg.num_residents(); ++n) {
      const double z = state.z[n];
      const double a = obs.alpha[n];
      const double floor = (1.0 - mg.residents[n].delta) * a;
      if (z > v * price - a + margin && dispatch.p[n] < floor - margin) {
        out.push_back(fmt::format("resident {}: Z = {} > V*{} - alpha = {} but p = {} < {}", n, z, label,
                                  v * price - a, dispatch.p[n], floor));
      }
      if (z < v * price - a - margin && dispatch.p[n] > zero) {
        out.push_back(fmt::format("resident {}: Z = {} < V*{} - alpha = {} but p = {}", n, z, label, v * price - a,
                                  dispatch.p[n]));
      }
    }
  };

  // Bounds that hold whatever the market side.
  for (std::size_t k = 0; k < mg.num_batteries(); ++k) {
    const double x = battery_queue(state.e[k], mg.batteries[k], v, g);
    if (x > -v * g.w_min + margin && dispatch.r[k] > zero) {
      out.push_back(fmt::format("battery {}: X = {} > -V*w_min = {} but r = {}", k, x, -v * g.w_min, dispatch.r[k]));
    }
    if (x < -v * g.c_max - margin && dispatch.d[k] > zero) {
      out.push_back(fmt::format("battery {}: X = {} < -V*c_max = {} but d = {}", k, x, -v * g.c_max, dispatch.d[k]));
    }
  }
  for (std::size_t n = 0; n < mg.num_residents(); ++n) {
    const auto& r = mg.residents[n];
    const double z = state.z[n];
    const double floor = (1.0 - r.delta) * obs.alpha[n];
    if (z > v * g.c_max + margin && dispatch.p[n] < floor - margin) {
      out.push_back(fmt::format("resident {}: Z = {} > V*c_max = {} but p = {} < {}", n, z, v * g.c_max,
                                dispatch.p[n], floor));
    }
    if (z < v * g.w_min - r.alpha_max - margin && dispatch.p[n] > zero) {
      out.push_back(fmt::format("resident {}: Z = {} < V*w_min - alpha_max = {} but p = {}", n, z,
                                v * g.w_min - r.alpha_max, dispatch.p[n]));
    }
  }

  if (dispatch.q > zero) {
    battery_rules(obs.c, "C");
    quality_rules(obs.c, "C");
  }
  if (dispatch.s > zero) {
    battery_rules(obs.w, "W");
    quality_rules(obs.w, "W");
  }
  return out;
}

}  // namespace mgsched
