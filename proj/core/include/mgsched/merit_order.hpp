#pragma once

// Exact solver for a single-node energy balance with box-bounded sources and
// sinks and a linear objective:
//
//   minimize   sum_i cost_i * x_i - sum_j value_j * y_j
//   subject to sum_i x_i = sum_j y_j,  0 <= x_i <= cap_i,  0 <= y_j <= cap_j,
//              mandatory offers fully dispatched.
//
// Mandatory supply is poured into bids by descending value; the remaining
// offers clear against the remaining bids in merit order while value exceeds
// cost.

#include <cstdint>
#include <span>
#include <vector>

namespace mgsched {

enum class OfferKind : std::uint8_t { kSurplus = 0, kDischarge = 1, kPurchase = 2 };
enum class BidKind : std::uint8_t { kQuality = 0, kRecharge = 1, kSale = 2 };

struct Offer {
  OfferKind kind = OfferKind::kSurplus;
  int index = -1;  // battery index for discharge offers
  double unit_cost = 0.0;
  double capacity = 0.0;
  bool mandatory = false;
};

struct Bid {
  BidKind kind = BidKind::kQuality;
  int index = -1;  // resident or battery index
  double unit_value = 0.0;
  double capacity = 0.0;
};

struct Clearing {
  bool feasible = false;
  std::vector<double> offer_qty;  // parallel to the offers passed in
  std::vector<double> bid_qty;    // parallel to the bids passed in
  double objective = 0.0;
};

Clearing merit_order_allocate(std::span<const Offer> offers, std::span<const Bid> bids);

}  // namespace mgsched
