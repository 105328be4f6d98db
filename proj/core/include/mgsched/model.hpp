#pragma once

// Static microgrid parameters and per-slot physics. Every quantity is an
// energy per slot (kWh) or a price ($/kWh); power traces are converted on
// ingestion.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgsched {

struct BatterySpec {
  double e_min = 0.0;
  double e_max = 0.0;
  double r_max = 0.0;  // max recharge per slot
  double d_max = 0.0;  // max discharge per slot
  double e_init = 0.0;

  // Headroom left after reserving one full recharge and one full discharge.
  double headroom() const { return e_max - e_min - r_max - d_max; }
  void validate() const;
};

struct ResidentSpec {
  double delta = 0.07;        // tolerated fraction of quality usage declined
  double alpha_max = 0.0;     // largest quality request in one slot
  double quality_mean = 0.0;  // long-run mean quality request
  double basic_lo = 0.0;
  double basic_hi = 0.0;

  void validate() const;
};

struct GridSpec {
  double q_max = 0.0;  // purchase limit per slot
  double s_max = 0.0;  // sale limit per slot
  double c_min = 0.0;
  double c_max = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;

  void validate() const;
};

// Static description of one microgrid: its storage fleet, residents and
// coupling point.
struct Microgrid {
  std::vector<BatterySpec> batteries;
  std::vector<ResidentSpec> residents;
  GridSpec grid;

  std::size_t num_batteries() const { return batteries.size(); }
  std::size_t num_residents() const { return residents.size(); }
  void validate() const;
};

// Exogenous inputs revealed at the start of a slot.
struct SlotObservation {
  double u = 0.0;              // renewable generation
  std::vector<double> basic;   // guaranteed usage, one per resident
  std::vector<double> alpha;   // quality requests, one per resident
  double c = 0.0;              // purchase price
  double w = 0.0;              // sell price

  void validate(const Microgrid& mg) const;
};

// One slot's control decision.
struct Dispatch {
  double q = 0.0;
  double s = 0.0;
  std::vector<double> r;
  std::vector<double> d;
  std::vector<double> p;
  double objective = 0.0;
  // Surplus discarded because no sink could absorb it (only with
  // curtailment enabled).
  double curtailed = 0.0;

  double total_recharge() const;
  double total_discharge() const;
  double total_service() const;
};

struct SystemState {
  std::int64_t t = 0;
  std::vector<double> e;  // battery energies
  std::vector<double> z;  // QoSE virtual queues

  static SystemState initial(const Microgrid& mg);
};

// Renewable energy left for quality usage after basic usage is served.
double surplus_power(const SlotObservation& obs);

// Largest control parameter for which the battery band is guaranteed.
double compute_vmax(std::span<const BatterySpec> batteries, const GridSpec& grid);
inline double compute_vmax(const Microgrid& mg) {
  return compute_vmax(mg.batteries, mg.grid);
}

// Advances battery energies by one slot. Throws BoundViolation if any battery
// leaves [e_min, e_max]; queues are not touched.
SystemState apply_dispatch(const SystemState& state, const Dispatch& dispatch,
                           std::span<const BatterySpec> batteries);

inline constexpr double kBalanceTolerance = 1e-9;

// Signed supply minus demand; zero for a balanced dispatch.
double balance_residual(const Dispatch& dispatch, double surplus);

// Lists every violated box, exclusivity and balance constraint. An empty
// result means the dispatch is physically admissible for this slot.
std::vector<std::string> check_dispatch(const Dispatch& dispatch, const SlotObservation& obs,
                                        const Microgrid& mg);

}  // namespace mgsched
