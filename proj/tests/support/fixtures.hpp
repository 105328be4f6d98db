#pragma once

// Small hand-built microgrids shared by the unit and acceptance tests.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "mgsched/config.hpp"
#include "mgsched/model.hpp"

namespace mgsched::testing {

inline BatterySpec battery(double e_max, double rate, double e_min = 0.0) {
  BatterySpec b;
  b.e_min = e_min;
  b.e_max = e_max;
  b.r_max = rate;
  b.d_max = rate;
  b.e_init = 0.5 * (e_min + e_max);
  return b;
}

inline ResidentSpec resident(double alpha_max, double delta = 0.07) {
  ResidentSpec r;
  r.delta = delta;
  r.alpha_max = alpha_max;
  r.quality_mean = alpha_max / 2.0;
  r.basic_lo = 0.0;
  r.basic_hi = 1.0;
  return r;
}

// Price bounds of the reference setting: c in [0.03, 0.10], w in [0.02, 0.06].
inline GridSpec grid(double q_max = 10.0, double s_max = 20.0) {
  GridSpec g;
  g.q_max = q_max;
  g.s_max = s_max;
  g.c_min = 0.03;
  g.c_max = 0.10;
  g.w_min = 0.02;
  g.w_max = 0.06;
  return g;
}

// One 16 kWh battery at 2 kWh per slot and one resident with 2.5 kWh
// quality requests; V_max = 150.
inline Microgrid reference_microgrid() {
  Microgrid mg;
  mg.batteries = {battery(16.0, 2.0)};
  mg.residents = {resident(2.5)};
  mg.grid = grid();
  return mg;
}

inline SlotObservation observation(double u, std::vector<double> basic, std::vector<double> alpha, double c,
                                   double w) {
  SlotObservation o;
  o.u = u;
  o.basic = std::move(basic);
  o.alpha = std::move(alpha);
  o.c = c;
  o.w = w;
  return o;
}

// Fresh scratch directory under the system temporary directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mgsched_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace mgsched::testing
