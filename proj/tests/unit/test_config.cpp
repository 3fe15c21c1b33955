#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "colombeau/app.hpp"

using namespace colombeau;

TEST(Config, DefaultsAreValid) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.corpus().size(), 9u);
  EXPECT_EQ(c.sweep_corpus().size(), 5u);
  const auto g = c.a_grid();
  ASSERT_EQ(g.size(), 20u);
  EXPECT_EQ(g.front(), 2.05);
  EXPECT_EQ(g.back(), 3.0);
}

TEST(Config, TextOverridesAndErrors) {
  RunConfig c;
  apply_config_text(c, "# comment\nschedule.count = 12\nsweep.alpha2 = 0, 0.25\nmollifier.kind = bspline_poly\n");
  EXPECT_EQ(c.schedule.count, 12);
  EXPECT_EQ(c.sweep_alpha2, (std::vector<double>{0.0, 0.25}));
  EXPECT_EQ(c.mollifier_kind, ProfileKind::bspline_poly);
  apply_override(c, "wormhole.throat_radius=2.7");
  EXPECT_EQ(c.wormhole.throat_radius, 2.7);
  EXPECT_THROW(apply_override(c, "no.such.key=1"), ConfigError);
  EXPECT_THROW(apply_override(c, "schedule.count=abc"), ConfigError);
  EXPECT_THROW(apply_override(c, "schedule.count"), ConfigError);
  RunConfig bad;
  bad.a_min = 1.5;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Config, EchoRoundTrips) {
  RunConfig c;
  c.wormhole.alpha2 = 0.1;
  c.half_widths = {0.3, 2.0};
  RunConfig d;
  for (const auto& [k, v] : c.entries()) d.set(k, v);
  EXPECT_EQ(c.entries(), d.entries());
}

TEST(Config, Formatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_csv_double(0.1), "0.10000000000000001");
}

TEST(Cli, RulesExitCodes) {
  RunConfig c;
  c.rule_moment_orders = {0};
  c.schedule.count = 2;
  std::ostringstream out, err;
  EXPECT_EQ(run_rules(c, out, err), 2);
  EXPECT_NE(err.str().find("theta_sq_plus"), std::string::npos);
}

TEST(Cli, VacuousRulesWarn) {
  RunConfig c;
  c.rule_moment_orders = {0};
  c.schedule.count = 10;
  c.centers = {3.0};
  c.half_widths = {1.0};
  std::ostringstream out, err;
  EXPECT_EQ(run_rules(c, out, err), 0);
  EXPECT_NE(err.str().find("vacuous"), std::string::npos);
}

TEST(Cli, GeometryAndMollifierReport) {
  RunConfig c;
  std::ostringstream out, err;
  EXPECT_EQ(run_geometry(c, out, err), 0);
  EXPECT_NE(out.str().find("2.2360679774997"), std::string::npos);
  std::ostringstream o2;
  EXPECT_EQ(run_mollifier_report(c, o2, err), 0);
  EXPECT_NE(o2.str().find("l1_norm"), std::string::npos);
}

TEST(Cli, SweepRowsAndHeader) {
  RunConfig c;
  c.a_steps = 2;
  c.a_min = 2.5;
  c.sweep_alpha2 = {0.0};
  c.sweep_forms = 1;
  c.schedule.count = 10;
  const std::string csv = nec_sweep_csv(c, 2);
  std::istringstream in(csv);
  std::string line;
  int comments = 0, rows = 0;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      ++comments;
      continue;
    }
    lines.push_back(line);
    ++rows;
  }
  EXPECT_EQ(comments, static_cast<int>(c.entries().size()) + 1);
  ASSERT_EQ(rows, 1 + 2 * 2 * 10);
  EXPECT_EQ(lines[0].substr(0, 22), "M,a,alpha2,inequality,");
  int violated = 0, holds = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].find(",sigma,") != std::string::npos && lines[i].find(",violated,") != std::string::npos) ++violated;
    if (lines[i].find(",sigma_minus_nu,") != std::string::npos && lines[i].find(",holds,") != std::string::npos) ++holds;
  }
  EXPECT_EQ(violated, 20);
  EXPECT_EQ(holds, 20);
  // a = 3: classical sigma - nu coefficient vanishes.
  int checked = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f;
    std::stringstream ss(lines[i]);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    ASSERT_EQ(f.size(), 14u);
    if (f[1] == "3" && f[3] == "sigma_minus_nu") {
      EXPECT_LE(std::abs(std::stod(f[10])), 1e-12);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 10);
}
