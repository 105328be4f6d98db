#pragma once

// Exogenous input traces: synthetic generation and CSV ingestion.
//
// CSV schemas (UTF-8, header row required, decimal point, 0-based indices):
//   wind:   slot,generation_kwh
//   prices: slot,purchase_price,sell_price
//   demand: slot,resident,basic_kwh,quality_kwh   (one row per slot and resident)

#include <random>
#include <string>
#include <vector>

#include "mgsched/config.hpp"
#include "mgsched/model.hpp"

namespace mgsched {

struct TraceSet {
  std::vector<SlotObservation> slots;
  // Empirical mean quality request per resident over the loaded horizon.
  std::vector<double> quality_mean;
};

// Draws config.horizon slots. Basic usage and quality requests are uniform
// within the active regime, prices are i.i.d. within the grid bounds with
// w < c, and generation is total basic usage plus a non-negative surplus
// (uniform, with occasional bursts).
std::vector<SlotObservation> generate_traces(const RunConfig& config, std::mt19937_64& rng);
std::vector<SlotObservation> generate_traces(const RunConfig& config);

// Reads the first config.horizon slots from the three CSV files. Throws
// InputError with file and line on malformed rows, and with the slot and
// field on bound violations.
TraceSet load_traces(const std::string& wind_path, const std::string& price_path,
                     const std::string& demand_path, const RunConfig& config);

void write_traces(const std::string& prefix, const std::vector<SlotObservation>& slots);

std::vector<double> empirical_quality_mean(const std::vector<SlotObservation>& slots, std::size_t residents);

}  // namespace mgsched
