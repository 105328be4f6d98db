#pragma once

// Subcommand implementations. Each returns the process exit code:
// 0 clean, 1 input error, 2 bound or assertion failure. Human-readable
// progress goes to `out`, diagnostics to `err`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mgsched::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitViolation = 2;

struct RunArgs {
  std::string config;
  std::string wind;
  std::string prices;
  std::string demand;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool curtail = false;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep_v(const std::string& config, const std::vector<double>& fractions, const std::string& out_prefix,
                std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& config, const std::string& out_prefix, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& config, int trials, std::uint64_t seed, double v_scale, std::ostream& out,
                 std::ostream& err);
int cmd_gen_traces(const std::string& config, const std::string& out_prefix, std::optional<std::uint64_t> seed,
                   std::ostream& out, std::ostream& err);

}  // namespace mgsched::cli
