#include <gtest/gtest.h>

#include <sstream>

#include "mgsched_cli/commands.hpp"
#include "fixtures.hpp"

namespace mgsched::cli {
namespace {

namespace fs = std::filesystem;
using mgsched::testing::read_file;
using mgsched::testing::write_file;

constexpr const char* kConfig = R"({
  "horizon": 300,
  "seed": 9,
  "batteries": [ { "count": 2, "e_max_kwh": 16, "charge_kw": 8 } ],
  "residents": [ { "count": 4, "delta": 0.07 } ]
})";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = mgsched::testing::scratch_dir(std::string("cli_") +
                                         ::testing::UnitTest::GetInstance()->current_test_info()->name());
    config_ = path("config.json");
    write_file(config_, kConfig);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  RunArgs run_args(const std::string& prefix) const {
    RunArgs a;
    a.config = config_;
    a.out = path(prefix);
    return a;
  }

  fs::path dir_;
  std::string config_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, RunWritesBothOutputs) {
  EXPECT_EQ(cmd_run(run_args("a"), out_, err_), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(path("a.slots.csv")));
  EXPECT_TRUE(fs::exists(path("a.summary.txt")));
  EXPECT_NE(read_file(path("a.summary.txt")).find("violations_total = 0"), std::string::npos);
}

TEST_F(Cli, RunIsByteIdentical) {
  ASSERT_EQ(cmd_run(run_args("a"), out_, err_), kExitOk);
  ASSERT_EQ(cmd_run(run_args("b"), out_, err_), kExitOk);
  EXPECT_EQ(read_file(path("a.slots.csv")), read_file(path("b.slots.csv")));
  EXPECT_EQ(read_file(path("a.summary.txt")), read_file(path("b.summary.txt")));
}

TEST_F(Cli, RunRejectsZeroVFraction) {
  write_file(config_, R"({"v_fraction": 0, "batteries": [{"e_max_kwh": 16, "charge_kw": 8}], "residents": [{}]})");
  EXPECT_EQ(cmd_run(run_args("a"), out_, err_), kExitInput);
}

TEST_F(Cli, RunRejectsMalformedPriceCsv) {
  write_file(config_, R"({"horizon": 2, "batteries": [{"e_max_kwh": 16, "charge_kw": 8}], "residents": [{}]})");
  write_file(path("w.csv"), "slot,generation_kwh\n0,5\n1,5\n");
  write_file(path("p.csv"), "slot,purchase_price,sell_price\n0,0.05\n1,0.05,0.03\n");
  write_file(path("d.csv"), "slot,resident,basic_kwh,quality_kwh\n0,0,1,1\n1,0,1,1\n");
  RunArgs a = run_args("a");
  a.wind = path("w.csv");
  a.prices = path("p.csv");
  a.demand = path("d.csv");
  EXPECT_EQ(cmd_run(a, out_, err_), kExitInput);
  EXPECT_NE(err_.str().find("p.csv:2"), std::string::npos) << err_.str();
}

TEST_F(Cli, RunWithCsvTraces) {
  write_file(config_, R"({"horizon": 2, "batteries": [{"e_max_kwh": 16, "charge_kw": 8}], "residents": [{}]})");
  write_file(path("w.csv"), "slot,generation_kwh\n0,5\n1,1\n");
  write_file(path("p.csv"), "slot,purchase_price,sell_price\n0,0.05,0.03\n1,0.05,0.03\n");
  write_file(path("d.csv"), "slot,resident,basic_kwh,quality_kwh\n0,0,1,1\n1,0,1,1\n");
  RunArgs a = run_args("a");
  a.wind = path("w.csv");
  a.prices = path("p.csv");
  a.demand = path("d.csv");
  EXPECT_EQ(cmd_run(a, out_, err_), kExitOk) << err_.str();
}

TEST_F(Cli, SweepSingleFractionIsMonotone) {
  EXPECT_EQ(cmd_sweep_v(config_, {1.0}, path("s"), out_, err_), kExitOk) << err_.str();
  const std::string csv = read_file(path("s.sweep.csv"));
  EXPECT_EQ(csv.rfind("fraction,total_cost,mean_outage_ratio\n1,", 0), 0u) << csv;
}

TEST_F(Cli, SweepRejectsFractionAboveOne) {
  EXPECT_EQ(cmd_sweep_v(config_, {1.5}, path("s"), out_, err_), kExitInput);
}

TEST_F(Cli, CompareWithDegenerateBenchmarkCompletes) {
  write_file(config_, R"({"horizon": 300, "batteries": [{"e_max_kwh": 16, "charge_kw": 8}],
                          "residents": [{"count": 3}], "mecp": {"block_prob": 1, "charge_prob": 0}})");
  const int code = cmd_compare(config_, path("c"), out_, err_);
  EXPECT_TRUE(code == kExitOk || code == kExitViolation) << err_.str();
  EXPECT_TRUE(fs::exists(path("c.proposed.summary.txt")));
  EXPECT_NE(read_file(path("c.mecp.summary.txt")).find("outage_ratio = 1"), std::string::npos);
}

TEST_F(Cli, CompareIsDeterministic) {
  cmd_compare(config_, path("x"), out_, err_);
  cmd_compare(config_, path("y"), out_, err_);
  EXPECT_EQ(read_file(path("x.proposed.summary.txt")), read_file(path("y.proposed.summary.txt")));
  EXPECT_EQ(read_file(path("x.mecp.summary.txt")), read_file(path("y.mecp.summary.txt")));
}

TEST_F(Cli, ValidateDefaultTrialsPass) {
  EXPECT_EQ(cmd_validate(config_, 100, 1, 1.0, out_, err_), kExitOk) << out_.str() << err_.str();
  EXPECT_NE(out_.str().find("solver vs oracle"), std::string::npos);
}

TEST_F(Cli, ValidateZeroTrialsIsAnInputError) {
  EXPECT_EQ(cmd_validate(config_, 0, 1, 1.0, out_, err_), kExitInput);
}

TEST_F(Cli, ValidateCatchesOversizedV) {
  EXPECT_EQ(cmd_validate(config_, 20, 1, 2.0, out_, err_), kExitViolation);
  EXPECT_NE(err_.str().find("battery band"), std::string::npos) << err_.str();
  EXPECT_NE(err_.str().find("state:"), std::string::npos);
  EXPECT_NE(err_.str().find("observation:"), std::string::npos);
  EXPECT_NE(err_.str().find("dispatch:"), std::string::npos);
}

TEST_F(Cli, GenTracesRoundTripsThroughRun) {
  ASSERT_EQ(cmd_gen_traces(config_, path("g"), std::nullopt, out_, err_), kExitOk) << err_.str();
  RunArgs a = run_args("from_csv");
  a.wind = path("g.wind.csv");
  a.prices = path("g.prices.csv");
  a.demand = path("g.demand.csv");
  ASSERT_EQ(cmd_run(a, out_, err_), kExitOk) << err_.str();
  ASSERT_EQ(cmd_run(run_args("generated"), out_, err_), kExitOk);
  EXPECT_EQ(read_file(path("from_csv.slots.csv")), read_file(path("generated.slots.csv")));
}

}  // namespace
}  // namespace mgsched::cli
