#pragma once

// Per-slot drift-plus-penalty controller.
//
// Each slot minimizes
//   V*(Q*C - S*W) + sum_k X_k*(R_k - D_k) - sum_n (Z_n + alpha_n)*p_n
// subject to the energy balance and box limits. Because purchase and sale
// are exclusive the problem splits into a purchase-mode LP (S = 0) and a
// sell-mode LP (Q = 0); both are solved exactly by merit order and the
// cheaper one is applied.

#include <string>
#include <vector>

#include "mgsched/merit_order.hpp"
#include "mgsched/model.hpp"

namespace mgsched {

enum class Mode { kPurchase, kSell };

struct DispatchOptions {
  // Discard surplus no sink can absorb instead of throwing UnservableSurplus.
  bool curtail = false;
  // Limit recharge/discharge by the instantaneous energy headroom. Inactive
  // for 0 < V <= V_max; disabling it exposes the raw policy to the battery
  // band check.
  bool clamp_headroom = true;
};

// Coefficients and limits of one slot's linear program. The objective is
//   purchase_cost*Q - sale_value*S + sum_k battery_coef[k]*(R_k - D_k)
//   - sum_n quality_value[n]*p_n.
struct SlotProblem {
  double surplus = 0.0;
  std::vector<double> battery_coef;
  std::vector<double> recharge_cap;
  std::vector<double> discharge_cap;
  std::vector<double> quality_value;
  std::vector<double> quality_cap;
  double purchase_cost = 0.0;
  double purchase_cap = 0.0;
  double sale_value = 0.0;
  double sale_cap = 0.0;

  double objective(const Dispatch& d) const;
  // Total energy the sinks available in `mode` can take.
  double sink_capacity(Mode mode) const;
};

SlotProblem make_slot_problem(const SystemState& state, const SlotObservation& obs, const Microgrid& mg,
                              double v, const DispatchOptions& options = {});

struct Subproblem {
  std::vector<Offer> offers;
  std::vector<Bid> bids;
};

Subproblem build_subproblem(Mode mode, const SlotProblem& problem);

struct SubproblemResult {
  bool feasible = false;
  Dispatch dispatch;
  double objective = 0.0;
};

SubproblemResult solve_subproblem(Mode mode, const SlotProblem& problem);

// Solves both modes and keeps the cheaper feasible result. Exact ties prefer
// a no-trade dispatch, then the purchase mode. Curtailment follows
// `curtail`; otherwise an unservable surplus throws.
Dispatch solve_slot(const SlotProblem& problem, bool curtail);

Dispatch dispatch_slot(const SystemState& state, const SlotObservation& obs, const Microgrid& mg, double v,
                       const DispatchOptions& options = {});

// Threshold structure every optimal dispatch must satisfy: battery and QoSE
// thresholds at the price bounds, plus the thresholds at the current price
// of whichever market side is active. Only strict inequalities are checked.
std::vector<std::string> assert_lemma_structure(const Dispatch& dispatch, const SystemState& state,
                                                const SlotObservation& obs, const Microgrid& mg, double v);

}  // namespace mgsched
