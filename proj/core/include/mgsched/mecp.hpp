#pragma once

// Heuristic benchmark controller: coin-toss blocking of quality requests,
// renewable-first service, store-then-sell of any excess, discharge-then-buy
// on a shortfall, and an occasional opportunistic charging purchase.

#include <random>

#include "mgsched/model.hpp"

namespace mgsched {

struct MecpParams {
  double block_prob = 0.07;
  double charge_prob = 0.5;
  bool curtail = false;

  void validate() const;
};

// Draws exactly N + 1 uniforms from `rng` per call (one per resident, one
// for the charging coin), so the stream stays aligned across slots.
Dispatch mecp_dispatch(const SystemState& state, const SlotObservation& obs, const Microgrid& mg,
                       std::mt19937_64& rng, const MecpParams& params);

}  // namespace mgsched
