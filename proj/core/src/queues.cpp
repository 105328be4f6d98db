#include "mgsched/queues.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mgsched/errors.hpp"

namespace mgsched {

double battery_queue(double e, const BatterySpec& spec, double v, const GridSpec& grid) {
  return e - spec.d_max - spec.e_min - v * grid.c_max;
}

QueueView queue_view(const SystemState& state, const Microgrid& mg, double v) {
  QueueView view;
  view.v = v;
  view.x.reserve(mg.num_batteries());
  for (std::size_t k = 0; k < mg.num_batteries(); ++k) {
    view.x.push_back(battery_queue(state.e[k], mg.batteries[k], v, mg.grid));
  }
  view.z = state.z;
  return view;
}

double update_qose_queue(double z, double alpha, double p, double delta) {
  if (!(z >= 0.0) || !(alpha >= 0.0) || !(p >= 0.0) || !(delta >= 0.0)) {
    throw InputError(fmt::format("update_qose_queue: negative input (z={}, alpha={}, p={}, delta={})", z, alpha, p, delta));
  }
  if (p > alpha) {
    throw InputError(fmt::format("update_qose_queue: service {} exceeds request {}", p, alpha));
  }
  return std::max(z - delta * alpha, 0.0) + (alpha - p);
}

BoundConstants bound_constants(const Microgrid& mg, double v) {
  BoundConstants out;
  for (const auto& b : mg.batteries) {
    const double m = std::max(b.d_max, b.r_max);
    out.b += 0.5 * m * m;
  }
  for (const auto& r : mg.residents) {
    out.b += 0.5 * (2.0 + r.delta * r.delta) * r.alpha_max * r.alpha_max;
  }
  out.b_star = out.b;
  out.z_max.reserve(mg.num_residents());
  for (const auto& r : mg.residents) {
    const double z_max = v * mg.grid.c_max + r.alpha_max;
    out.z_max.push_back(z_max);
    out.b_star += z_max * (1.0 - r.delta) * r.alpha_max;
  }
  return out;
}

QueueBand battery_queue_band(const BatterySpec& spec, double v, const GridSpec& grid) {
  return {-v * grid.c_max - spec.d_max, spec.e_max - v * grid.c_max - spec.d_max - spec.e_min};
}

std::vector<bool> check_qose_stability(std::span<const double> outage_sums,
                                       std::span<const double> alpha_sums,
                                       std::span<const double> deltas,
                                       std::span<const double> z_max) {
  const std::size_t n = outage_sums.size();
  if (alpha_sums.size() != n || deltas.size() != n || z_max.size() != n) {
    throw InputError("check_qose_stability: dimension mismatch");
  }
  std::vector<bool> pass(n);
  for (std::size_t i = 0; i < n; ++i) {
    pass[i] = outage_sums[i] <= deltas[i] * alpha_sums[i] + z_max[i];
  }
  return pass;
}

}  // namespace mgsched
