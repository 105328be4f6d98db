#pragma once

// Run configuration. The on-disk form is a JSON document whose power-like
// fields are in kW and are converted to per-slot energies with slot_hours;
// see README.md for the schema.

#include <cstdint>
#include <string>
#include <vector>

#include "mgsched/mecp.hpp"
#include "mgsched/model.hpp"

namespace mgsched {

enum class Policy { kProposed, kMecp };

std::string to_string(Policy policy);
Policy parse_policy(const std::string& name);

// Demand distribution in force from start_slot onwards (energies per slot).
struct Regime {
  std::int64_t start_slot = 0;
  double basic_lo = 0.0;
  double basic_hi = 0.0;
  double quality_max = 0.0;
};

// Synthetic trace generator settings (energies per slot).
struct TraceModel {
  // Per-resident regime 0 comes from ResidentSpec; these are overrides for
  // every resident from their start slot onwards.
  std::vector<Regime> regimes;
  // Per-resident quality maximum before the first override; defaults to
  // ResidentSpec::alpha_max when empty.
  std::vector<double> base_quality_max;
  double surplus_lo = 0.0;  // total renewable surplus above basic usage
  double surplus_hi = 0.0;
  double burst_prob = 0.0;
  double burst_lo = 0.0;
  double burst_hi = 0.0;
};

struct RunConfig {
  Microgrid microgrid;
  TraceModel traces;
  MecpParams mecp;
  Policy policy = Policy::kProposed;
  double v_fraction = 1.0;
  std::int64_t horizon = 0;
  double slot_hours = 0.25;
  std::uint64_t seed = 1;
  bool curtail = false;
  std::int64_t window_slots = 500;
  double convergence_tolerance = 0.03;
  // Multiplies V after v_fraction is applied; values above one void the
  // battery-band guarantee and exist only to exercise the monitors.
  double v_scale = 1.0;

  void validate() const;
  double v_max() const { return compute_vmax(microgrid); }
  double v() const { return v_scale * v_fraction * v_max(); }
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace mgsched
