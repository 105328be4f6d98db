#pragma once

// Plain-text outputs of a run: the per-slot CSV and the key = value summary
// document. Numbers are printed in shortest round-trip form so that two
// identical runs produce identical bytes.

#include <ostream>
#include <span>
#include <string>

#include "mgsched/simulator.hpp"

namespace mgsched {

std::string slot_csv_header(std::size_t batteries, std::size_t residents);
void write_slot_csv(std::ostream& out, std::span<const SlotRecord> records, std::size_t batteries,
                    std::size_t residents);
void write_slot_csv(const std::string& path, std::span<const SlotRecord> records, std::size_t batteries,
                    std::size_t residents);

// One "key = value" line per Summary field; per-resident fields are comma
// separated lists in resident order.
std::string format_summary(const Summary& summary);
void write_summary(const std::string& path, const Summary& summary);

}  // namespace mgsched
