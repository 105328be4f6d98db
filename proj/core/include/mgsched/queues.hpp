#pragma once

// Virtual-queue algebra for the drift-plus-penalty controller.
//
// The battery queue X_k is an affine shift of the stored energy,
//   X_k = E_k - d_max - e_min - V * c_max,
// and is recomputed from E_k whenever it is needed. The QoSE queue Z_n
// accumulates declined quality usage and drains at delta_n * alpha_n per
// slot; keeping it bounded enforces the long-run outage target.

#include <span>
#include <vector>

#include "mgsched/model.hpp"

namespace mgsched {

struct QueueView {
  std::vector<double> x;  // battery queues, may be negative
  std::vector<double> z;  // QoSE queues, non-negative
  double v = 0.0;
};

struct BoundConstants {
  double b = 0.0;             // drift constant
  std::vector<double> z_max;  // per-resident worst-case QoSE backlog
  double b_star = 0.0;        // cost-gap constant; the online cost is within b_star / V of optimal
};

double battery_queue(double e, const BatterySpec& spec, double v, const GridSpec& grid);

QueueView queue_view(const SystemState& state, const Microgrid& mg, double v);

// Z(t+1) = max(Z - delta * alpha, 0) + (alpha - p). Throws InputError for
// p > alpha or negative inputs.
double update_qose_queue(double z, double alpha, double p, double delta);

BoundConstants bound_constants(const Microgrid& mg, double v);

// Band on X_k equivalent to e_min <= E_k <= e_max.
struct QueueBand {
  double lo = 0.0;
  double hi = 0.0;
};
QueueBand battery_queue_band(const BatterySpec& spec, double v, const GridSpec& grid);

// Resident n passes iff its accumulated outage is within delta_n times its
// accumulated requests plus the finite-horizon slack z_max[n].
std::vector<bool> check_qose_stability(std::span<const double> outage_sums,
                                       std::span<const double> alpha_sums,
                                       std::span<const double> deltas,
                                       std::span<const double> z_max);

}  // namespace mgsched
