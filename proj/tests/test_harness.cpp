#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "adelic/error.hpp"
#include "adelic_harness/harness.hpp"

using namespace adelic;
using namespace adelic::harness;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto end = s.find("\r\n", pos);
    out.push_back(s.substr(pos, end - pos));
    pos = end + 2;
  }
  return out;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const ExperimentConfig c = parse_config({{"p", 3}, {"T", {0.5, 1.0}}, {"primes_upto", 50}, {"workers", 2}});
  EXPECT_EQ(c.p, 3u);
  ASSERT_EQ(c.T.size(), 2u);
  EXPECT_EQ(*c.N, 15u);
  EXPECT_EQ(c.workers, 2u);
  EXPECT_EQ(c.format, Format::csv);
  EXPECT_EQ(parse_config({{"T", 2.0}}).T, std::vector<double>{2.0});
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config({{"p", 4}}), ConfigError);
  EXPECT_THROW(parse_config({{"b", -1.0}}), ConfigError);
  EXPECT_THROW(parse_config({{"format", "xml"}}), ConfigError);
  EXPECT_THROW(parse_config({{"sigma", {{"C", 1.0}, {"s", 1.0}}}}), ConfigError);
  EXPECT_THROW(parse_config({{"inject_fault", "beta"}}), ConfigError);
  EXPECT_THROW(parse_config({{"N", 4}, {"primes_upto", 50}}), ConfigError);
  EXPECT_THROW(parse_config({{"n_paths", "many"}}), ConfigError);
  EXPECT_THROW(parse_config(json::array()), ConfigError);
}

TEST(Config, ObservablePotentialAndPoints) {
  const json raw = {
      {"observable", {{"factors", {{{"prime", 2}, {"terms", {{{"center_digits", {1}}, {"radius_exp", -1}}}}}}}}},
      {"potential",
       {{"components", {{{"prime", 3}, {"weight", 0.5}, {"terms", {{{"center_digits", {0}}, {"radius_exp", 0}}}}}}}}},
      {"points", {{{"components", {{{"prime", 2}, {"digits", {1, 1}}}}}}}}};
  const ExperimentConfig c = parse_config(raw);
  ASSERT_EQ(c.points.size(), 1u);
  // 3 = 1 + 1*2 lies in the ball 1 + 2Z_2.
  EXPECT_EQ(c.observable(c.points[0]), std::complex<double>(1.0));
  EXPECT_EQ(c.potential.max_index(), std::optional<std::size_t>(1));
  EXPECT_THROW(parse_config({{"observable", {{"factors", {{{"prime", 6}, {"terms", json::array()}}}}}}}),
               ConfigError);
}

TEST(Render, CsvQuotingAndSchemaLine) {
  Table t{"demo.v1", {"a", "b"}, {}};
  t.add({Cell(1LL), Cell(std::string("x,\"y\""))});
  t.add({Cell(0.1), Cell()});
  const auto l = lines(render(t, Format::csv));
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "#schema=demo.v1");
  EXPECT_EQ(l[1], "a,b");
  EXPECT_EQ(l[2], "1,\"x,\"\"y\"\"\"");
  EXPECT_EQ(l[3], "0.10000000000000001,");
  EXPECT_THROW(t.add({Cell(1LL)}), NumericError);
}

TEST(Render, JsonLinesRoundTrip) {
  Table t{"demo.v1", {"a", "b", "c"}, {}};
  t.add({Cell(2.5), Cell(true), Cell()});
  std::istringstream in(render(t, Format::json));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(json::parse(header).at("schema"), "demo.v1");
  const json r = json::parse(row);
  EXPECT_EQ(r.at("a"), 2.5);
  EXPECT_EQ(r.at("b"), true);
  EXPECT_TRUE(r.at("c").is_null());
}

TEST(Commands, DensityNormalizationRow) {
  const RunResult r = run_command("density", parse_config({{"p", 2}, {"m_lo", -60}, {"m_hi", 80}}));
  const auto& last = r.table.rows.back();
  EXPECT_EQ(std::get<std::string>(last[0]), "normalization");
  EXPECT_NEAR(std::get<double>(last[3]), 1.0, 1e-12);
  EXPECT_NEAR(r.derived.at("alpha").get<double>(), 2.0 / 3.0, 1e-15);
}

TEST(Commands, ExitAtZeroHorizonAndUnknownCommand) {
  const RunResult r = run_command("exit", parse_config({{"T", {0.0, 1.0}}, {"n_paths", 2000}, {"epochs", 4}}));
  ASSERT_EQ(r.table.rows.size(), 2u);
  EXPECT_EQ(std::get<double>(r.table.rows[0][3]), 1.0);
  EXPECT_NEAR(std::get<double>(r.table.rows[1][2]), std::exp(-2.0 / 3.0), 1e-15);
  EXPECT_THROW(run_command("nope", parse_config(json::object())), ConfigError);
}

TEST(Commands, OperatorRejectsNonSummableSigma) {
  EXPECT_THROW(run_command("operator", parse_config({{"sigma", {{"C", 1.0}, {"s", 0.5}}}})), ConfigError);
}

TEST(Commands, FkNeedsPairsForKernelTasks) {
  EXPECT_THROW(run_command("fk", parse_config({{"N", 2}, {"fk", {{"tasks", {"kernel"}}}}})), ConfigError);
  EXPECT_THROW(run_command("fk", parse_config({{"N", 2}, {"fk", {{"tasks", {"bogus"}}}}})), ConfigError);
}

TEST(Manifest, RecordsConfigAndDerivedQuantities) {
  const ExperimentConfig cfg = parse_config({{"T", 1.0}, {"primes_upto", 50}, {"n_paths", 2000}, {"seed", 9}});
  const RunResult r = run_command("exit-count", cfg);
  const json m = make_manifest("exit-count", cfg, r, 0.5);
  EXPECT_EQ(m.at("command"), "exit-count");
  EXPECT_EQ(m.at("config"), cfg.raw);
  EXPECT_EQ(m.at("seed"), 9);
  EXPECT_EQ(m.at("version"), kArtifactVersion);
  EXPECT_EQ(m.at("derived").at("N"), 15);
  EXPECT_GT(m.at("derived").at("tail_certificate").get<double>(), 0.99);
  EXPECT_TRUE(m.at("derived").at("all_bounds_hold").get<bool>());
  // Re-running from the recorded config reproduces the table.
  const RunResult again = run_command("exit-count", parse_config(m.at("config")));
  EXPECT_EQ(render(again.table, Format::csv), render(r.table, Format::csv));
}

TEST(Validation, QuickSuitePassesAndFaultIsCaught) {
  ValidationOptions opt;
  opt.quick = true;
  const auto ok = run_validation(opt);
  ASSERT_EQ(ok.size(), 12u);
  for (const auto& c : ok) EXPECT_TRUE(c.pass) << c.id << " " << c.name << " " << c.detail;
  opt.inject_fault = "alpha";
  const auto bad = run_validation(opt);
  EXPECT_FALSE(bad[1].pass);
}
