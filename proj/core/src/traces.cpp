#include "mgsched/traces.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <fmt/os.h>

#include "mgsched/errors.hpp"
#include "mgsched/random.hpp"

namespace mgsched {

namespace {

inline constexpr std::uint64_t kTraceStream = 0;

const Regime* active_regime(const TraceModel& model, std::int64_t t) {
  const Regime* found = nullptr;
  for (const auto& r : model.regimes) {
    if (r.start_slot <= t) found = &r;
  }
  return found;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class CsvReader {
 public:
  CsvReader(const std::string& path, const std::vector<std::string>& header) : path_(path), in_(path) {
    if (!in_) throw InputError(fmt::format("{}: cannot open file", path));
    std::string line;
    if (!next_line(line)) throw InputError(fmt::format("{}: empty file, expected header", path));
    const auto cols = split(line);
    bool ok = cols.size() == header.size();
    for (std::size_t i = 0; ok && i < cols.size(); ++i) {
      std::string_view c = cols[i];
      if (i == 0 && c.substr(0, 3) == "\xEF\xBB\xBF") c.remove_prefix(3);
      ok = c == header[i];
    }
    if (!ok) {
      std::string expected;
      for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
      throw InputError(fmt::format("{}:{}: bad header, expected '{}'", path, line_no_, expected));
    }
    width_ = header.size();
  }

  // Returns false at end of file; blank lines are skipped.
  bool row(std::vector<double>& values) {
    std::string line;
    while (next_line(line)) {
      if (trim(line).empty()) continue;
      const auto cols = split(line);
      if (cols.size() != width_) {
        throw InputError(fmt::format("{}:{}: expected {} fields, got {}", path_, line_no_, width_, cols.size()));
      }
      values.resize(width_);
      for (std::size_t i = 0; i < width_; ++i) {
        const std::string_view c = cols[i];
        double v = 0.0;
        const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
        if (res.ec != std::errc{} || res.ptr != c.data() + c.size() || c.empty()) {
          throw InputError(fmt::format("{}:{}: field {} is not a number: '{}'", path_, line_no_, i + 1, c));
        }
        values[i] = v;
      }
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_no_; }
  const std::string& path() const { return path_; }

 private:
  bool next_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }

  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::size_t width_ = 0;
};

std::int64_t as_index(double v, const CsvReader& r, const char* what) {
  if (v < 0.0 || v != static_cast<double>(static_cast<std::int64_t>(v))) {
    throw InputError(fmt::format("{}:{}: {} must be a non-negative integer", r.path(), r.line(), what));
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::vector<SlotObservation> generate_traces(const RunConfig& config, std::mt19937_64& rng) {
  const Microgrid& mg = config.microgrid;
  const TraceModel& model = config.traces;
  const GridSpec& g = mg.grid;
  const std::size_t n_count = mg.num_residents();
  std::vector<SlotObservation> out;
  out.reserve(static_cast<std::size_t>(config.horizon));
  for (std::int64_t t = 0; t < config.horizon; ++t) {
    SlotObservation obs;
    obs.basic.resize(n_count);
    obs.alpha.resize(n_count);
    const Regime* regime = active_regime(model, t);
    for (std::size_t n = 0; n < n_count; ++n) {
      const ResidentSpec& r = mg.residents[n];
      double lo = r.basic_lo;
      double hi = r.basic_hi;
      double qmax = model.base_quality_max.empty() ? r.alpha_max : model.base_quality_max[n];
      if (regime != nullptr) {
        lo = regime->basic_lo;
        hi = regime->basic_hi;
        qmax = regime->quality_max;
      }
      obs.basic[n] = uniform(rng, lo, hi);
      obs.alpha[n] = std::min(uniform(rng, 0.0, qmax), r.alpha_max);
    }
    double surplus = uniform(rng, model.surplus_lo, model.surplus_hi);
    const double burst_draw = uniform01(rng);
    const double burst_size = uniform(rng, model.burst_lo, model.burst_hi);
    if (burst_draw < model.burst_prob) surplus += burst_size;
    obs.u = std::accumulate(obs.basic.begin(), obs.basic.end(), 0.0) + surplus;

    // Purchase price first, then a sell price strictly below it.
    for (;;) {
      obs.c = uniform(rng, g.c_min, g.c_max);
      const double w_hi = std::min(g.w_max, obs.c);
      if (w_hi <= g.w_min) continue;
      obs.w = uniform(rng, g.w_min, w_hi);
      if (obs.w < obs.c) break;
    }
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<SlotObservation> generate_traces(const RunConfig& config) {
  auto rng = make_rng(config.seed, kTraceStream);
  return generate_traces(config, rng);
}

std::vector<double> empirical_quality_mean(const std::vector<SlotObservation>& slots, std::size_t residents) {
  std::vector<double> mean(residents, 0.0);
  if (slots.empty()) return mean;
  for (const auto& s : slots) {
    for (std::size_t n = 0; n < residents; ++n) mean[n] += s.alpha[n];
  }
  for (auto& m : mean) m /= static_cast<double>(slots.size());
  return mean;
}

TraceSet load_traces(const std::string& wind_path, const std::string& price_path, const std::string& demand_path,
                     const RunConfig& config) {
  const Microgrid& mg = config.microgrid;
  const auto horizon = static_cast<std::size_t>(config.horizon);
  const std::size_t n_count = mg.num_residents();
  TraceSet set;
  set.slots.resize(horizon);
  for (auto& s : set.slots) {
    s.basic.assign(n_count, 0.0);
    s.alpha.assign(n_count, 0.0);
  }
  std::vector<double> row;

  {
    CsvReader r(wind_path, {"slot", "generation_kwh"});
    std::size_t t = 0;
    while (t < horizon && r.row(row)) {
      if (static_cast<std::size_t>(as_index(row[0], r, "slot")) != t) {
        throw InputError(fmt::format("{}:{}: expected slot {}", r.path(), r.line(), t));
      }
      set.slots[t].u = row[1];
      ++t;
    }
    if (t < horizon) throw InputError(fmt::format("{}: only {} slots, horizon is {}", wind_path, t, horizon));
  }
  {
    CsvReader r(price_path, {"slot", "purchase_price", "sell_price"});
    std::size_t t = 0;
    while (t < horizon && r.row(row)) {
      if (static_cast<std::size_t>(as_index(row[0], r, "slot")) != t) {
        throw InputError(fmt::format("{}:{}: expected slot {}", r.path(), r.line(), t));
      }
      set.slots[t].c = row[1];
      set.slots[t].w = row[2];
      ++t;
    }
    if (t < horizon) throw InputError(fmt::format("{}: only {} slots, horizon is {}", price_path, t, horizon));
  }
  {
    CsvReader r(demand_path, {"slot", "resident", "basic_kwh", "quality_kwh"});
    std::vector<char> seen(horizon * n_count, 0);
    while (r.row(row)) {
      const auto t = static_cast<std::size_t>(as_index(row[0], r, "slot"));
      const auto n = static_cast<std::size_t>(as_index(row[1], r, "resident"));
      if (t >= horizon) continue;
      if (n >= n_count) {
        throw InputError(fmt::format("{}:{}: resident {} out of range (config has {})", r.path(), r.line(), n, n_count));
      }
      if (seen[t * n_count + n]) {
        throw InputError(fmt::format("{}:{}: duplicate row for slot {} resident {}", r.path(), r.line(), t, n));
      }
      seen[t * n_count + n] = 1;
      set.slots[t].basic[n] = row[2];
      set.slots[t].alpha[n] = row[3];
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        throw InputError(fmt::format("{}: no row for slot {} resident {}", demand_path, i / n_count, i % n_count));
      }
    }
  }

  for (std::size_t t = 0; t < horizon; ++t) {
    try {
      set.slots[t].validate(mg);
    } catch (const InputError& e) {
      throw InputError(fmt::format("slot {}: {}", t, e.what()));
    }
  }
  set.quality_mean = empirical_quality_mean(set.slots, n_count);
  return set;
}

void write_traces(const std::string& prefix, const std::vector<SlotObservation>& slots) {
  {
    auto out = fmt::output_file(prefix + ".wind.csv");
    out.print("slot,generation_kwh\n");
    for (std::size_t t = 0; t < slots.size(); ++t) out.print("{},{}\n", t, slots[t].u);
  }
  {
    auto out = fmt::output_file(prefix + ".prices.csv");
    out.print("slot,purchase_price,sell_price\n");
    for (std::size_t t = 0; t < slots.size(); ++t) out.print("{},{},{}\n", t, slots[t].c, slots[t].w);
  }
  {
    auto out = fmt::output_file(prefix + ".demand.csv");
    out.print("slot,resident,basic_kwh,quality_kwh\n");
    for (std::size_t t = 0; t < slots.size(); ++t) {
      for (std::size_t n = 0; n < slots[t].basic.size(); ++n) {
        out.print("{},{},{},{}\n", t, n, slots[t].basic[n], slots[t].alpha[n]);
      }
    }
  }
}

}  // namespace mgsched
