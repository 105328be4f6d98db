#pragma once

// Hindsight lower bound on the average operating cost achievable over a
// realized trace.
//
// The battery band is relaxed to "average recharge equals average
// discharge" and the outage target to its time-average form; both are
// dualized with multipliers mu_k (free) and nu_n (>= 0):
//
//   LB(mu, nu) = (1/T) sum_t min [ Q*C - S*W + sum_k mu_k (R_k - D_k)
//                                  + sum_n nu_n ((1 - delta_n) alpha_n - p_n) ]
//
// Each inner minimum is a single-slot program solved exactly by merit
// order. Any (mu, nu) gives a valid bound by weak duality; projected
// subgradient ascent tightens it.

#include <span>
#include <vector>

#include "mgsched/model.hpp"

namespace mgsched {

struct DualPoint {
  std::vector<double> mu;
  std::vector<double> nu;
};

struct DualEvaluation {
  double value = 0.0;          // LB(mu, nu) in $/slot
  DualPoint subgradient;       // time averages of (R - D) and ((1 - delta) alpha - p)
};

DualEvaluation evaluate_dual(std::span<const SlotObservation> traces, const Microgrid& mg, const DualPoint& point);

struct LowerBoundResult {
  double best = 0.0;
  DualPoint best_point;
  std::vector<double> best_so_far;  // one entry per iteration
};

LowerBoundResult hindsight_lower_bound(std::span<const SlotObservation> traces, const Microgrid& mg,
                                       int iterations);

}  // namespace mgsched
