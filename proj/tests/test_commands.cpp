#include <gtest/gtest.h>

#include <sstream>

#include "gamemac/commands.hpp"

using namespace gamemac;

namespace {

RunConfig quick(std::string game, int type, std::string grid, std::vector<std::string> resources) {
  RunConfig c;
  c.game = std::move(game);
  c.channel_type = type;
  c.grid = EtaGrid::parse(grid);
  c.resources = std::move(resources);
  c.optimizer.restarts = 4;
  return c;
}

void expect_config_error(const RunConfig& c, const std::string& field) {
  try {
    c.validate();
    FAIL() << "expected a configuration error naming " << field;
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind(field + ":", 0), 0u) << e.what();
  }
}

}  // namespace

TEST(EtaGrid, ParseAndPoints) {
  const auto g = EtaGrid::parse("0:1:11");
  const auto p = g.points();
  ASSERT_EQ(p.size(), 11u);
  EXPECT_EQ(p.front(), 0.0);
  EXPECT_EQ(p.back(), 1.0);
  EXPECT_NEAR(p[3], 0.3, 1e-15);
  EXPECT_EQ(EtaGrid::parse("0.5:0.5:1").points(), std::vector<double>{0.5});
  EXPECT_THROW(EtaGrid::parse("0:1"), ConfigError);
  EXPECT_THROW(EtaGrid::parse("0:1.5:3"), ConfigError);
  EXPECT_THROW(EtaGrid::parse("0:1:0"), ConfigError);
  EXPECT_THROW(EtaGrid::parse("a:1:3"), ConfigError);
}

TEST(RunConfig, ClampsDegenerateEndpoints) {
  std::ostringstream warnings;
  const auto two = quick("chsh", 2, "0:1:3", {"NS-exact"}).etas(warnings);
  EXPECT_EQ(two.front(), kEtaClamp);
  EXPECT_NE(warnings.str().find("warning"), std::string::npos);
  std::ostringstream more;
  const auto one = quick("chsh", 1, "0:1:3", {"NS-exact"}).etas(more);
  EXPECT_EQ(one.front(), 0.0);
  EXPECT_EQ(one.back(), 1.0 - kEtaClamp);
}

TEST(RunConfig, ValidationNamesTheField) {
  expect_config_error(quick("ghz", 2, "0:1:3", {"NS-exact"}), "game");
  expect_config_error(quick("chsh", 3, "0:1:3", {"NS-exact"}), "channel-type");
  expect_config_error(quick("chsh", 2, "0:1:3", {"Q-exact"}), "resources");
  expect_config_error(quick("magic-square", 1, "0:1:3", {"L-exact"}), "resources");
  expect_config_error(quick("mpp:3", 1, "0:1:3", {"Q-lower"}), "resources");
  expect_config_error(quick("chsh", 1, "0:1:3", {"bogus"}), "resources");
  auto bad = quick("chsh", 1, "0:1:3", {"NS-exact"});
  bad.optimizer.restarts = 0;
  expect_config_error(bad, "optimizer");
}

TEST(RunConfig, MagicSquareClassicalExactRefusalSuggestsBound) {
  try {
    quick("magic-square", 1, "0:1:3", {"L-exact"}).validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("L-bound"), std::string::npos);
  }
}

TEST(Sweep, CsvLayout) {
  std::ostringstream csv, warnings;
  run_sweep(quick("chsh", 2, "0:1:11", {"NS-exact"}), csv, warnings);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kSweepHeader);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4) << line;
  }
  EXPECT_EQ(rows, 11);
  EXPECT_NE(csv.str().find("\n1,NS-exact,exact,2,"), std::string::npos);
}

TEST(Sweep, MagicSquareQuantumColumnIsConstant) {
  std::ostringstream warnings;
  for (const auto& row : run_sweep_rows(quick("magic-square", 1, "0:1:5", {"Q-exact"}), warnings))
    EXPECT_EQ(io::format_double(row.result.value), "3.169925001");
}

TEST(Sweep, ByteDeterministic) {
  const auto config = quick("chsh", 2, "0.5:1:3", {"L-exact", "Q-lower", "L-bound"});
  std::ostringstream a, b, w;
  run_sweep(config, a, w);
  run_sweep(config, b, w);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Verify, CleanRunPassesAndIsDeterministic) {
  VerifyOptions options;
  options.triples = 20;
  std::ostringstream first, second;
  EXPECT_TRUE(run_verify(options, first));
  EXPECT_TRUE(run_verify(options, second));
  EXPECT_EQ(first.str(), second.str());
}

TEST(Verify, InjectedFaultFailsConstantNoiseCheck) {
  VerifyOptions options;
  options.triples = 5;
  options.inject_fault = true;
  std::ostringstream report;
  EXPECT_FALSE(run_verify(options, report));
  EXPECT_NE(report.str().find("FAIL  constant-noise chsh"), std::string::npos) << report.str();
}

TEST(Table, ReproducesPublishedValues) {
  OptimizerConfig cfg;
  for (const auto& row : comparison_table(cfg)) EXPECT_NEAR(row.computed, row.reference, 0.01) << row.game << " " << row.quantity;
}

TEST(GameValueCommand, Output) {
  std::ostringstream out;
  run_game_value("mpp:4", out);
  EXPECT_NE(out.str().find("omega_L 0.875 (14/16)"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("closed form 0.875"), std::string::npos);
}

TEST(BoxExport, NamedBoxes) {
  EXPECT_EQ(named_boxes("local:chsh").size(), 16u);
  EXPECT_EQ(named_boxes("mpp:3").front().scenario(), (Scenario{3, 2, 2}));
  EXPECT_THROW(named_boxes("nope"), ConfigError);
  std::ostringstream out;
  run_box_export("pr", out);
  std::istringstream in(out.str());
  const auto boxes = read_box_csv(in);
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_EQ(boxes.front().table()[0], 0.5);
}
