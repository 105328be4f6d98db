#include "mgsched/merit_order.hpp"

#include <algorithm>
#include <numeric>

#include "mgsched/errors.hpp"

namespace mgsched {

namespace {

bool is_self_pair(const Offer& o, const Bid& b) {
  return o.kind == OfferKind::kDischarge && b.kind == BidKind::kRecharge && o.index == b.index;
}

}  // namespace

Clearing merit_order_allocate(std::span<const Offer> offers, std::span<const Bid> bids) {
  for (const auto& o : offers) {
    if (!(o.capacity >= 0.0)) throw InputError("merit_order_allocate: negative offer capacity");
  }
  for (const auto& b : bids) {
    if (!(b.capacity >= 0.0)) throw InputError("merit_order_allocate: negative bid capacity");
  }

  std::vector<std::size_t> offer_order(offers.size());
  std::iota(offer_order.begin(), offer_order.end(), 0);
  std::stable_sort(offer_order.begin(), offer_order.end(), [&](std::size_t a, std::size_t b) {
    const Offer& x = offers[a];
    const Offer& y = offers[b];
    if (x.mandatory != y.mandatory) return x.mandatory;
    if (!x.mandatory && x.unit_cost != y.unit_cost) return x.unit_cost < y.unit_cost;
    if (x.kind != y.kind) return x.kind < y.kind;
    return x.index < y.index;
  });

  std::vector<std::size_t> bid_order(bids.size());
  std::iota(bid_order.begin(), bid_order.end(), 0);
  std::stable_sort(bid_order.begin(), bid_order.end(), [&](std::size_t a, std::size_t b) {
    const Bid& x = bids[a];
    const Bid& y = bids[b];
    if (x.unit_value != y.unit_value) return x.unit_value > y.unit_value;
    if (x.kind != y.kind) return x.kind < y.kind;
    return x.index < y.index;
  });

  Clearing out;
  out.offer_qty.assign(offers.size(), 0.0);
  out.bid_qty.assign(bids.size(), 0.0);
  std::vector<double> bid_left(bids.size());
  for (std::size_t j = 0; j < bids.size(); ++j) bid_left[j] = bids[j].capacity;

  // Mandatory supply goes to the most valuable sinks regardless of price.
  std::size_t first_open = 0;
  for (std::size_t oi : offer_order) {
    const Offer& o = offers[oi];
    if (!o.mandatory) break;
    double left = o.capacity;
    while (left > 0.0 && first_open < bid_order.size()) {
      const std::size_t bj = bid_order[first_open];
      const double take = std::min(left, bid_left[bj]);
      left -= take;
      bid_left[bj] -= take;
      out.bid_qty[bj] += take;
      if (bid_left[bj] <= 0.0) ++first_open;
    }
    // Absorb rounding left over when the surplus exactly matches total sink
    // capacity.
    if (left <= 1e-12 * std::max(1.0, o.capacity)) left = 0.0;
    out.offer_qty[oi] = o.capacity - left;
    if (left > 0.0) {
      out.feasible = false;
      return out;
    }
  }

  for (std::size_t oi : offer_order) {
    const Offer& o = offers[oi];
    if (o.mandatory) continue;
    double left = o.capacity;
    for (std::size_t pos = first_open; pos < bid_order.size() && left > 0.0; ++pos) {
      const std::size_t bj = bid_order[pos];
      const Bid& b = bids[bj];
      if (!(b.unit_value > o.unit_cost)) break;
      if (bid_left[bj] <= 0.0 || is_self_pair(o, b)) continue;
      const double take = std::min(left, bid_left[bj]);
      left -= take;
      bid_left[bj] -= take;
      out.bid_qty[bj] += take;
    }
    out.offer_qty[oi] = o.capacity - left;
    while (first_open < bid_order.size() && bid_left[bid_order[first_open]] <= 0.0) ++first_open;
  }

  out.feasible = true;
  double objective = 0.0;
  for (std::size_t i = 0; i < offers.size(); ++i) {
    if (!offers[i].mandatory) objective += offers[i].unit_cost * out.offer_qty[i];
  }
  for (std::size_t j = 0; j < bids.size(); ++j) objective -= bids[j].unit_value * out.bid_qty[j];
  out.objective = objective;
  return out;
}

}  // namespace mgsched
