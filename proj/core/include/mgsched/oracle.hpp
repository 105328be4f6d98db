#pragma once

// Brute-force reference for the per-slot program. Every battery's net
// charge and every resident's service is enumerated on a uniform grid (box
// endpoints included); the market variable of the mode is then fixed by the
// balance, so each visited point is exactly feasible. The best value found
// is an upper bound on the exact optimum and is within
// grid_step * sum|objective coefficients| of it.
//
// Cost grows as (cap / grid_step)^(K + N); dimensions are capped at two
// batteries and two residents.

#include <array>

#include "mgsched/dispatch.hpp"
#include "mgsched/model.hpp"

namespace mgsched {

inline constexpr std::size_t kOracleMaxBatteries = 2;
inline constexpr std::size_t kOracleMaxResidents = 2;

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  Dispatch dispatch;
  // Sum of absolute objective coefficients of the mode; scales the grid
  // error bound.
  double coefficient_mass = 0.0;
};

// Results indexed by Mode (purchase first, then sell).
std::array<OracleResult, 2> oracle_solve(const SystemState& state, const SlotObservation& obs,
                                         const Microgrid& mg, double v, double grid_step,
                                         bool clamp_headroom = true);

}  // namespace mgsched
