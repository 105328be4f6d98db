#include "mgsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "mgsched/errors.hpp"

namespace mgsched {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

bool finite(double x) { return std::isfinite(x); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

void BatterySpec::validate() const {
  require(finite(e_min) && finite(e_max) && finite(r_max) && finite(d_max) && finite(e_init),
          "battery: parameters must be finite");
  require(e_min >= 0.0 && e_min < e_max, fmt::format("battery: need 0 <= e_min < e_max (got {}, {})", e_min, e_max));
  require(r_max > 0.0 && d_max > 0.0, "battery: r_max and d_max must be positive");
  require(headroom() > 0.0,
          fmt::format("battery: e_max - e_min = {} must exceed r_max + d_max = {}", e_max - e_min,
                      r_max + d_max));
  require(e_init >= e_min && e_init <= e_max,
          fmt::format("battery: e_init {} outside [{}, {}]", e_init, e_min, e_max));
}

void ResidentSpec::validate() const {
  require(finite(delta) && finite(alpha_max) && finite(quality_mean) && finite(basic_lo) && finite(basic_hi),
          "resident: parameters must be finite");
  require(delta > 0.0 && delta < 1.0, fmt::format("resident: delta {} not in (0, 1)", delta));
  require(quality_mean > 0.0 && quality_mean <= alpha_max,
          fmt::format("resident: need 0 < quality_mean <= alpha_max (got {}, {})", quality_mean, alpha_max));
  require(basic_lo >= 0.0 && basic_lo <= basic_hi,
          fmt::format("resident: need 0 <= basic_lo <= basic_hi (got {}, {})", basic_lo, basic_hi));
}

void GridSpec::validate() const {
  require(finite(q_max) && finite(s_max) && finite(c_min) && finite(c_max) && finite(w_min) && finite(w_max),
          "grid: parameters must be finite");
  require(q_max > 0.0 && s_max > 0.0, "grid: q_max and s_max must be positive");
  require(c_min <= c_max && w_min <= w_max, "grid: price bounds are inverted");
  require(w_min >= 0.0, "grid: prices must be non-negative");
  require(c_max >= w_max && c_min >= w_min && c_max > w_min,
          "grid: need c_max >= w_max, c_min >= w_min and c_max > w_min");
}

void Microgrid::validate() const {
  require(!batteries.empty(), "microgrid: at least one battery is required");
  require(!residents.empty(), "microgrid: at least one resident is required");
  for (const auto& b : batteries) b.validate();
  for (const auto& r : residents) r.validate();
  grid.validate();
}

void SlotObservation::validate(const Microgrid& mg) const {
  const std::size_t n = mg.num_residents();
  require(basic.size() == n && alpha.size() == n,
          fmt::format("observation: expected {} residents, got basic={} alpha={}", n, basic.size(), alpha.size()));
  require(finite(u) && u >= 0.0, "observation: generation must be finite and non-negative");
  for (std::size_t i = 0; i < n; ++i) {
    require(finite(basic[i]) && basic[i] >= 0.0, fmt::format("observation: basic[{}] invalid", i));
    require(finite(alpha[i]) && alpha[i] >= 0.0 && alpha[i] <= mg.residents[i].alpha_max,
            fmt::format("observation: alpha[{}] = {} outside [0, {}]", i, alpha[i], mg.residents[i].alpha_max));
  }
  require(sum(basic) <= u,
          fmt::format("observation: basic usage {} exceeds generation {}", sum(basic), u));
  const GridSpec& g = mg.grid;
  require(c >= g.c_min && c <= g.c_max, fmt::format("observation: purchase price {} outside [{}, {}]", c, g.c_min, g.c_max));
  require(w >= g.w_min && w <= g.w_max, fmt::format("observation: sell price {} outside [{}, {}]", w, g.w_min, g.w_max));
  require(w < c, fmt::format("observation: sell price {} must be below purchase price {}", w, c));
}

double Dispatch::total_recharge() const { return sum(r); }
double Dispatch::total_discharge() const { return sum(d); }
double Dispatch::total_service() const { return sum(p); }

SystemState SystemState::initial(const Microgrid& mg) {
  SystemState s;
  s.t = 0;
  s.e.reserve(mg.num_batteries());
  for (const auto& b : mg.batteries) s.e.push_back(b.e_init);
  s.z.assign(mg.num_residents(), 0.0);
  return s;
}

double surplus_power(const SlotObservation& obs) {
  const double basic = sum(obs.basic);
  if (basic > obs.u) {
    throw InputError(fmt::format("basic usage {} exceeds generation {}", basic, obs.u));
  }
  return obs.u - basic;
}

double compute_vmax(std::span<const BatterySpec> batteries, const GridSpec& grid) {
  grid.validate();
  if (batteries.empty()) throw InputError("compute_vmax: no batteries");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : batteries) {
    b.validate();
    best = std::min(best, b.headroom());
  }
  return best / (grid.c_max - grid.w_min);
}

SystemState apply_dispatch(const SystemState& state, const Dispatch& dispatch,
                           std::span<const BatterySpec> batteries) {
  if (dispatch.r.size() != batteries.size() || dispatch.d.size() != batteries.size() ||
      state.e.size() != batteries.size()) {
    throw InputError("apply_dispatch: battery dimension mismatch");
  }
  SystemState next = state;
  next.t = state.t + 1;
  for (std::size_t k = 0; k < batteries.size(); ++k) {
    next.e[k] = state.e[k] - dispatch.d[k] + dispatch.r[k];
    const auto& b = batteries[k];
    if (next.e[k] < b.e_min - kBalanceTolerance || next.e[k] > b.e_max + kBalanceTolerance) {
      throw BoundViolation(fmt::format(
          "battery {} leaves its band at slot {}: e = {} (r = {}, d = {}) not in [{}, {}]", k, next.t,
          next.e[k], dispatch.r[k], dispatch.d[k], b.e_min, b.e_max));
    }
    // Rounding can put the energy a hair outside the band.
    next.e[k] = std::clamp(next.e[k], b.e_min, b.e_max);
  }
  return next;
}

double balance_residual(const Dispatch& dispatch, double surplus) {
  return surplus - dispatch.curtailed + dispatch.q + dispatch.total_discharge() - dispatch.s -
         dispatch.total_recharge() - dispatch.total_service();
}

std::vector<std::string> check_dispatch(const Dispatch& dispatch, const SlotObservation& obs,
                                        const Microgrid& mg) {
  std::vector<std::string> out;
  constexpr double eps = 1e-9;
  const std::size_t k_count = mg.num_batteries();
  const std::size_t n_count = mg.num_residents();
  if (dispatch.r.size() != k_count || dispatch.d.size() != k_count || dispatch.p.size() != n_count) {
    out.push_back("dimension mismatch");
    return out;
  }
  const GridSpec& g = mg.grid;
  if (dispatch.q < 0.0 || dispatch.q > g.q_max + eps) out.push_back(fmt::format("q = {} outside [0, {}]", dispatch.q, g.q_max));
  if (dispatch.s < 0.0 || dispatch.s > g.s_max + eps) out.push_back(fmt::format("s = {} outside [0, {}]", dispatch.s, g.s_max));
  if (dispatch.q > 0.0 && dispatch.s > 0.0) out.push_back(fmt::format("simultaneous purchase {} and sale {}", dispatch.q, dispatch.s));
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& b = mg.batteries[k];
    if (dispatch.r[k] < 0.0 || dispatch.r[k] > b.r_max + eps)
      out.push_back(fmt::format("r[{}] = {} outside [0, {}]", k, dispatch.r[k], b.r_max));
    if (dispatch.d[k] < 0.0 || dispatch.d[k] > b.d_max + eps)
      out.push_back(fmt::format("d[{}] = {} outside [0, {}]", k, dispatch.d[k], b.d_max));
    if (dispatch.r[k] > 0.0 && dispatch.d[k] > 0.0)
      out.push_back(fmt::format("battery {} recharges {} and discharges {}", k, dispatch.r[k], dispatch.d[k]));
  }
  for (std::size_t n = 0; n < n_count; ++n) {
    if (dispatch.p[n] < 0.0 || dispatch.p[n] > obs.alpha[n] + eps)
      out.push_back(fmt::format("p[{}] = {} outside [0, {}]", n, dispatch.p[n], obs.alpha[n]));
  }
  if (dispatch.curtailed < 0.0) out.push_back("negative curtailment");
  const double surplus = obs.u - std::accumulate(obs.basic.begin(), obs.basic.end(), 0.0);
  const double residual = balance_residual(dispatch, surplus);
  if (std::abs(residual) > kBalanceTolerance * std::max(1.0, surplus)) {
    out.push_back(fmt::format("balance residual {}", residual));
  }
  return out;
}

}  // namespace mgsched
