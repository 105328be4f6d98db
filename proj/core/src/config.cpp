#include "mgsched/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mgsched/errors.hpp"

namespace mgsched {

using nlohmann::json;

std::string to_string(Policy policy) { return policy == Policy::kProposed ? "proposed" : "mecp"; }

Policy parse_policy(const std::string& name) {
  if (name == "proposed") return Policy::kProposed;
  if (name == "mecp") return Policy::kMecp;
  throw InputError(fmt::format("unknown policy '{}' (expected proposed or mecp)", name));
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("config: field '{}': {}", key, e.what()));
  }
}

template <typename T>
T get_required(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw InputError(fmt::format("config: {} is missing '{}'", where, key));
  return get_or<T>(j, key, T{});
}

std::pair<double, double> get_range(const json& j, const char* key, std::pair<double, double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = get_or<std::vector<double>>(j, key, {});
  if (v.size() != 2 || v[0] > v[1]) {
    throw InputError(fmt::format("config: '{}' must be a [lo, hi] pair with lo <= hi", key));
  }
  return {v[0], v[1]};
}

std::size_t get_count(const json& j) {
  const auto count = get_or<long long>(j, "count", 1);
  if (count < 1) throw InputError("config: 'count' must be at least 1");
  return static_cast<std::size_t>(count);
}

}  // namespace

void RunConfig::validate() const {
  microgrid.validate();
  mecp.validate();
  if (!(v_fraction > 0.0 && v_fraction <= 1.0)) {
    throw InputError(fmt::format("config: v_fraction {} not in (0, 1]", v_fraction));
  }
  if (!(v_scale > 0.0)) throw InputError("config: v_scale must be positive");
  if (horizon < 1) throw InputError("config: horizon must be at least 1 slot");
  if (!(slot_hours > 0.0)) throw InputError("config: slot_hours must be positive");
  if (window_slots < 1) throw InputError("config: window_slots must be at least 1");
  if (!(convergence_tolerance >= 0.0)) throw InputError("config: convergence_tolerance must be non-negative");
  if (traces.surplus_lo < 0.0 || traces.surplus_lo > traces.surplus_hi) {
    throw InputError("config: surplus range must satisfy 0 <= lo <= hi");
  }
  if (traces.burst_prob < 0.0 || traces.burst_prob > 1.0 || traces.burst_lo < 0.0 ||
      traces.burst_lo > traces.burst_hi) {
    throw InputError("config: burst settings are invalid");
  }
  if (!traces.base_quality_max.empty() && traces.base_quality_max.size() != microgrid.num_residents()) {
    throw InputError("config: base quality maxima do not match the resident count");
  }
  std::int64_t last = 0;
  for (const auto& r : traces.regimes) {
    if (r.start_slot < last) throw InputError("config: regimes must be sorted by start_slot");
    last = r.start_slot;
    if (r.basic_lo < 0.0 || r.basic_lo > r.basic_hi || r.quality_max <= 0.0) {
      throw InputError("config: regime ranges are invalid");
    }
  }
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("config: {}", e.what()));
  }
  if (!root.is_object()) throw InputError("config: top level must be an object");

  RunConfig cfg;
  cfg.horizon = get_or<std::int64_t>(root, "horizon", 96 * 5);
  cfg.slot_hours = get_or<double>(root, "slot_hours", 0.25);
  cfg.seed = get_or<std::uint64_t>(root, "seed", 1);
  cfg.v_fraction = get_or<double>(root, "v_fraction", 1.0);
  cfg.policy = parse_policy(get_or<std::string>(root, "policy", "proposed"));
  cfg.curtail = get_or<bool>(root, "curtail", false);
  cfg.window_slots = get_or<std::int64_t>(root, "window_slots", 500);
  cfg.convergence_tolerance = get_or<double>(root, "convergence_tolerance", 0.03);
  const double h = cfg.slot_hours;
  if (!(h > 0.0)) throw InputError("config: slot_hours must be positive");

  if (!root.contains("batteries") || !root["batteries"].is_array()) {
    throw InputError("config: 'batteries' must be an array");
  }
  for (const auto& jb : root["batteries"]) {
    BatterySpec b;
    b.e_min = get_or<double>(jb, "e_min_kwh", 0.0);
    b.e_max = get_required<double>(jb, "e_max_kwh", "battery");
    b.r_max = get_required<double>(jb, "charge_kw", "battery") * h;
    b.d_max = get_or<double>(jb, "discharge_kw", b.r_max / h) * h;
    b.e_init = get_or<double>(jb, "e_init_kwh", 0.5 * (b.e_min + b.e_max));
    const std::size_t count = get_count(jb);
    for (std::size_t i = 0; i < count; ++i) cfg.microgrid.batteries.push_back(b);
  }

  std::vector<double> base_quality;
  if (!root.contains("residents") || !root["residents"].is_array()) {
    throw InputError("config: 'residents' must be an array");
  }
  for (const auto& jr : root["residents"]) {
    ResidentSpec r;
    r.delta = get_or<double>(jr, "delta", 0.07);
    const auto basic = get_range(jr, "basic_kw", {2.0, 25.0});
    r.basic_lo = basic.first * h;
    r.basic_hi = basic.second * h;
    const double quality = get_or<double>(jr, "quality_kw_max", 10.0) * h;
    r.alpha_max = quality;
    const std::size_t count = get_count(jr);
    for (std::size_t i = 0; i < count; ++i) {
      cfg.microgrid.residents.push_back(r);
      base_quality.push_back(quality);
    }
  }
  const double n_res = static_cast<double>(cfg.microgrid.residents.size());

  const json jt = root.value("traces", json::object());
  const auto surplus = get_range(jt, "surplus_kw_per_resident", {0.0, 8.0});
  cfg.traces.surplus_lo = surplus.first * h * n_res;
  cfg.traces.surplus_hi = surplus.second * h * n_res;
  cfg.traces.burst_prob = get_or<double>(jt, "burst_prob", 0.05);
  const auto burst = get_range(jt, "burst_kw_per_resident", {10.0, 30.0});
  cfg.traces.burst_lo = burst.first * h * n_res;
  cfg.traces.burst_hi = burst.second * h * n_res;
  if (jt.contains("regimes")) {
    for (const auto& jg : jt["regimes"]) {
      Regime g;
      g.start_slot = get_required<std::int64_t>(jg, "start_slot", "regime");
      const auto basic = get_range(jg, "basic_kw", {2.0, 25.0});
      g.basic_lo = basic.first * h;
      g.basic_hi = basic.second * h;
      g.quality_max = get_required<double>(jg, "quality_kw_max", "regime") * h;
      cfg.traces.regimes.push_back(g);
    }
  }

  // alpha_max covers every regime; quality_mean is the time-weighted mean
  // request over the horizon.
  for (std::size_t n = 0; n < cfg.microgrid.residents.size(); ++n) {
    ResidentSpec& r = cfg.microgrid.residents[n];
    double weighted = 0.0;
    std::int64_t from = 0;
    double current = base_quality[n];
    for (const auto& g : cfg.traces.regimes) {
      r.alpha_max = std::max(r.alpha_max, g.quality_max);
      const std::int64_t to = std::clamp<std::int64_t>(g.start_slot, 0, cfg.horizon);
      weighted += static_cast<double>(std::max<std::int64_t>(0, to - from)) * current / 2.0;
      from = std::max(from, to);
      current = g.quality_max;
    }
    weighted += static_cast<double>(std::max<std::int64_t>(0, cfg.horizon - from)) * current / 2.0;
    r.quality_mean = cfg.horizon > 0 ? weighted / static_cast<double>(cfg.horizon) : current / 2.0;
  }
  cfg.traces.base_quality_max = base_quality;

  const json jg = root.value("grid", json::object());
  GridSpec& g = cfg.microgrid.grid;
  g.c_min = get_or<double>(jg, "c_min", 0.03);
  g.c_max = get_or<double>(jg, "c_max", 0.10);
  g.w_min = get_or<double>(jg, "w_min", 0.02);
  g.w_max = get_or<double>(jg, "w_max", 0.06);
  // Default market limits never bind: the purchase limit covers every
  // quality request plus every recharge, and the sale limit covers the
  // largest possible surplus plus every discharge.
  double sum_alpha = 0.0;
  for (const auto& r : cfg.microgrid.residents) sum_alpha += r.alpha_max;
  double sum_r = 0.0;
  double sum_d = 0.0;
  for (const auto& b : cfg.microgrid.batteries) {
    sum_r += b.r_max;
    sum_d += b.d_max;
  }
  g.q_max = jg.contains("q_max_kw") ? get_or<double>(jg, "q_max_kw", 0.0) * h : 2.0 * (sum_alpha + sum_r);
  g.s_max = jg.contains("s_max_kw") ? get_or<double>(jg, "s_max_kw", 0.0) * h
                                     : 2.0 * (cfg.traces.surplus_hi + cfg.traces.burst_hi + sum_d);

  const json jm = root.value("mecp", json::object());
  cfg.mecp.block_prob = get_or<double>(jm, "block_prob", cfg.microgrid.residents.empty() ? 0.07 : cfg.microgrid.residents.front().delta);
  cfg.mecp.charge_prob = get_or<double>(jm, "charge_prob", 0.5);

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("config: cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace mgsched
