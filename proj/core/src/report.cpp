#include "mgsched/report.hpp"

#include <fstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mgsched/errors.hpp"

namespace mgsched {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("{}: cannot open for writing", path));
  return out;
}

std::string join_bools(const std::vector<bool>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ',';
    s += values[i] ? "true" : "false";
  }
  return s;
}

}  // namespace

std::string slot_csv_header(std::size_t batteries, std::size_t residents) {
  std::string h = "t,cost_increment,cumulative_cost,q,s,sum_r,sum_d";
  for (std::size_t k = 1; k <= batteries; ++k) h += fmt::format(",e_{}", k);
  for (std::size_t n = 1; n <= residents; ++n) h += fmt::format(",z_{}", n);
  for (std::size_t n = 1; n <= residents; ++n) h += fmt::format(",outage_{}", n);
  return h;
}

void write_slot_csv(std::ostream& out, std::span<const SlotRecord> records, std::size_t batteries,
                    std::size_t residents) {
  out << slot_csv_header(batteries, residents) << '\n';
  fmt::memory_buffer line;
  for (const SlotRecord& rec : records) {
    line.clear();
    const Dispatch& d = rec.dispatch;
    fmt::format_to(std::back_inserter(line), "{},{},{},{},{},{},{}", rec.t, rec.cost_increment,
                   rec.cumulative_cost, d.q, d.s, d.total_recharge(), d.total_discharge());
    for (double v : rec.e) fmt::format_to(std::back_inserter(line), ",{}", v);
    for (double v : rec.z) fmt::format_to(std::back_inserter(line), ",{}", v);
    for (double v : rec.outage) fmt::format_to(std::back_inserter(line), ",{}", v);
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

void write_slot_csv(const std::string& path, std::span<const SlotRecord> records, std::size_t batteries,
                    std::size_t residents) {
  std::ofstream out = open_output(path);
  write_slot_csv(out, records, batteries, residents);
  if (!out) throw InputError(fmt::format("{}: write failed", path));
}

std::string format_summary(const Summary& s) {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
  const MonitorCounters& v = s.violations;
  line("policy", to_string(s.policy));
  line("slots", s.slots);
  line("v", s.v);
  line("v_max", s.v_max);
  line("bound_b", s.bounds.b);
  line("bound_b_star", s.bounds.b_star);
  line("z_max", fmt::format("{}", fmt::join(s.bounds.z_max, ",")));
  line("total_cost", s.total_cost);
  line("mean_cost", s.mean_cost);
  line("outage_ratio", fmt::format("{}", fmt::join(s.outage_ratio, ",")));
  line("mean_outage_ratio", s.mean_outage_ratio);
  line("quality_mean", fmt::format("{}", fmt::join(s.quality_mean, ",")));
  line("qose_stable", join_bools(s.qose_stable));
  line("convergence_tolerance", s.convergence_tolerance);
  line("convergence_slot", fmt::format("{}", fmt::join(s.convergence_slot, ",")));
  line("curtailed_kwh", s.curtailed_kwh);
  line("policy_monitors", s.policy_monitors ? "true" : "false");
  line("violations_battery_band", v.battery_band);
  line("violations_queue_bound", v.queue_bound);
  line("violations_outage_window", v.outage_window);
  line("violations_balance", v.balance);
  line("violations_exclusivity", v.exclusivity);
  line("violations_lemma", v.lemma);
  line("violations_total", v.total());
  line("first_violation", s.first_violation.empty() ? std::string("none") : s.first_violation);
  return out;
}

void write_summary(const std::string& path, const Summary& summary) {
  std::ofstream out = open_output(path);
  const std::string text = format_summary(summary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError(fmt::format("{}: write failed", path));
}

}  // namespace mgsched
