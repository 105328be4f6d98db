#include "mgsched/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mgsched/dispatch.hpp"
#include "mgsched/errors.hpp"

namespace mgsched {

DualEvaluation evaluate_dual(std::span<const SlotObservation> traces, const Microgrid& mg, const DualPoint& point) {
  const std::size_t k_count = mg.num_batteries();
  const std::size_t n_count = mg.num_residents();
  if (point.mu.size() != k_count || point.nu.size() != n_count) {
    throw InputError("evaluate_dual: multiplier dimension mismatch");
  }
  if (traces.empty()) throw InputError("evaluate_dual: empty trace");

  SlotProblem problem;
  problem.battery_coef = point.mu;
  problem.quality_value = point.nu;
  problem.recharge_cap.resize(k_count);
  problem.discharge_cap.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    problem.recharge_cap[k] = mg.batteries[k].r_max;
    problem.discharge_cap[k] = mg.batteries[k].d_max;
  }
  problem.quality_cap.resize(n_count);
  problem.purchase_cap = mg.grid.q_max;
  problem.sale_cap = mg.grid.s_max;

  DualEvaluation out;
  out.subgradient.mu.assign(k_count, 0.0);
  out.subgradient.nu.assign(n_count, 0.0);
  double total = 0.0;
  for (const SlotObservation& obs : traces) {
    problem.surplus = surplus_power(obs);
    problem.purchase_cost = obs.c;
    problem.sale_value = obs.w;
    double constant = 0.0;
    for (std::size_t n = 0; n < n_count; ++n) {
      problem.quality_cap[n] = obs.alpha[n];
      constant += point.nu[n] * (1.0 - mg.residents[n].delta) * obs.alpha[n];
    }
    const Dispatch d = solve_slot(problem, false);
    total += d.objective + constant;
    for (std::size_t k = 0; k < k_count; ++k) out.subgradient.mu[k] += d.r[k] - d.d[k];
    for (std::size_t n = 0; n < n_count; ++n) {
      out.subgradient.nu[n] += (1.0 - mg.residents[n].delta) * obs.alpha[n] - d.p[n];
    }
  }
  const auto t = static_cast<double>(traces.size());
  out.value = total / t;
  for (auto& g : out.subgradient.mu) g /= t;
  for (auto& g : out.subgradient.nu) g /= t;
  return out;
}

LowerBoundResult hindsight_lower_bound(std::span<const SlotObservation> traces, const Microgrid& mg,
                                       int iterations) {
  if (iterations < 1) throw InputError("hindsight_lower_bound: iterations must be at least 1");
  const GridSpec& g = mg.grid;
  // Outside these ranges the inner solutions saturate, so projecting onto
  // them costs nothing in tightness and keeps the steps well scaled.
  const double mu_lo = -g.c_max;
  const double mu_hi = -g.w_min;
  const double nu_hi = g.c_max;
  const double step_scale = 0.5 * (g.c_max - g.w_min);

  DualPoint point{std::vector<double>(mg.num_batteries(), 0.0), std::vector<double>(mg.num_residents(), 0.0)};
  LowerBoundResult result;
  result.best = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= iterations; ++i) {
    const DualEvaluation eval = evaluate_dual(traces, mg, point);
    if (eval.value > result.best) {
      result.best = eval.value;
      result.best_point = point;
    }
    result.best_so_far.push_back(result.best);

    double norm2 = 0.0;
    for (double v : eval.subgradient.mu) norm2 += v * v;
    for (double v : eval.subgradient.nu) norm2 += v * v;
    if (norm2 <= 0.0) break;  // stationary: the current point is optimal
    const double step = step_scale / std::sqrt(static_cast<double>(i)) / std::sqrt(norm2);
    for (std::size_t k = 0; k < point.mu.size(); ++k) {
      point.mu[k] = std::clamp(point.mu[k] + step * eval.subgradient.mu[k], mu_lo, mu_hi);
    }
    for (std::size_t n = 0; n < point.nu.size(); ++n) {
      point.nu[n] = std::clamp(point.nu[n] + step * eval.subgradient.nu[n], 0.0, nu_hi);
    }
  }
  return result;
}

}  // namespace mgsched
