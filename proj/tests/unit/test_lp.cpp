#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "instances.hpp"
#include "lad/error.hpp"
#include "lad/exact.hpp"
#include "lad/geo.hpp"
#include "lad/lp_export.hpp"
#include "lad/segments.hpp"
#include "tmpdir.hpp"

namespace {

lad::SegmentCache euclid_cache(const lad::Scenario& s) {
  lad::EuclideanProvider p(1.3, 40.0);
  return lad::precompute_segments(s, p);
}

lad::LpModel round_trip(const lad::Scenario& s, const lad::SegmentCache& c) {
  std::stringstream buf;
  lad::export_lp(s, c, buf);
  return lad::parse_lp(buf);
}

bool has_comment(const lad::LpModel& m, std::string_view needle) {
  for (const auto& c : m.comments)
    if (c.find(needle) != std::string::npos) return true;
  return false;
}

TEST(ExportLp, OneByOne) {
  const lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}}, {{0, 0}});
  const lad::LpModel m = round_trip(s, euclid_cache(s));
  EXPECT_TRUE(m.minimize);
  const lad::LpRow* cover = m.row("cover_0");
  ASSERT_NE(cover, nullptr);
  EXPECT_EQ(cover->sense, "=");
  EXPECT_EQ(cover->rhs, 1.0);
  EXPECT_EQ(cover->terms.at("x_0_0"), 1.0);
  for (const char* tag : {"(1)", "(2)", "(3)", "(4)", "(5)", "(6)"})
    EXPECT_TRUE(has_comment(m, tag)) << tag;
  for (const char* row : {"budget", "cap_0", "fuel_0", "time_0", "wait_0"})
    EXPECT_NE(m.row(row), nullptr) << row;
  EXPECT_TRUE(has_comment(m, "group 0 = g1"));
}

TEST(ExportLp, ZeroFuelRatesStillParse) {
  lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}}, {{0, 0}});
  s.vehicles[0].f_mob = 0;
  s.vehicles[0].f_stop = 0;
  const lad::LpModel m = round_trip(s, euclid_cache(s));
  const lad::LpRow* fuel = m.row("fuel_0");
  ASSERT_NE(fuel, nullptr);
  EXPECT_EQ(fuel->terms.size(), 1u);
}

TEST(ExportLp, Table2FixtureExactSolutionChecks) {
  const lad::Scenario s = fixtures::table2_fixture();
  const auto c = euclid_cache(s);
  const lad::Solution sol = lad::solve_exact(s, c, {});
  ASSERT_TRUE(sol.full_coverage());
  const lad::LpModel m = round_trip(s, c);
  const lad::LpCheck check = lad::check_lp_values(m, lad::lp_values_for(s, c, sol));
  EXPECT_TRUE(check.feasible) << (check.violations.empty() ? "" : check.violations.front());
  EXPECT_NEAR(check.objective, sol.total_cost, 1e-6 * std::max(1.0, sol.total_cost));
}

TEST(ExportLp, RandomExactSolutionsSatisfyTheModel) {
  std::mt19937_64 rng(17);
  fixtures::RandomSpec spec;
  spec.max_groups = 5;
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const lad::Scenario s = fixtures::random_instance(rng, spec);
    const auto c = euclid_cache(s);
    lad::Solution sol;
    try {
      sol = lad::solve_exact(s, c, {});
    } catch (const lad::InfeasibleError&) {
      continue;
    }
    const lad::LpCheck check = lad::check_lp_values(round_trip(s, c), lad::lp_values_for(s, c, sol));
    EXPECT_TRUE(check.feasible) << (check.violations.empty() ? "" : check.violations.front());
    EXPECT_NEAR(check.objective, sol.total_cost, 1e-6 * std::max(1.0, sol.total_cost));
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(ExportLp, DroppingAnAssignmentBreaksCover) {
  const lad::Scenario s = fixtures::table2_fixture();
  const auto c = euclid_cache(s);
  const lad::Solution sol = lad::solve_exact(s, c, {});
  auto values = lad::lp_values_for(s, c, sol);
  for (auto& [name, value] : values)
    if (name.rfind("x_", 0) == 0 && value > 0.5) {
      value = 0;
      break;
    }
  const lad::LpCheck check = lad::check_lp_values(round_trip(s, c), values);
  EXPECT_FALSE(check.feasible);
  ASSERT_FALSE(check.violations.empty());
  EXPECT_NE(check.violations.front().find("cover_"), std::string::npos);
}

TEST(ExportLp, MultiTripSolutionsAreRejected) {
  lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}, {3, 3}}, {{1, 0}});
  s.vehicles[0].cap = 1;
  const auto c = euclid_cache(s);
  lad::ExactConfig reload;
  reload.allow_reload = true;
  const lad::Solution sol = lad::solve_exact(s, c, reload);
  EXPECT_THROW(lad::lp_values_for(s, c, sol), lad::ValidationError);
}

TEST(ParseLp, BoundsAndSections) {
  std::istringstream in(
      "\\ comment\nMaximize\n obj: 2 a - b\nSubject To\n r1: a + b <= 4\n r2: - a >= -3\n"
      "Bounds\n 1 <= a <= 2\n b >= -1\n c free\nBinaries\n z\nEnd\n");
  const lad::LpModel m = lad::parse_lp(in);
  EXPECT_FALSE(m.minimize);
  EXPECT_EQ(m.objective.at("b"), -1.0);
  ASSERT_EQ(m.rows.size(), 2u);
  EXPECT_EQ(m.rows[1].terms.at("a"), -1.0);
  EXPECT_EQ(m.bounds.at("a"), std::make_pair(1.0, 2.0));
  EXPECT_EQ(m.bounds.at("b").first, -1.0);
  EXPECT_EQ(m.binaries, std::vector<std::string>{"z"});

  EXPECT_TRUE(lad::check_lp_values(m, {{"a", 1}, {"b", 3}, {"z", 1}}).feasible);
  EXPECT_FALSE(lad::check_lp_values(m, {{"a", 1}, {"b", 3}, {"z", 0.5}}).feasible);
  EXPECT_FALSE(lad::check_lp_values(m, {{"a", 2}, {"b", 3}}).feasible);
  EXPECT_NEAR(lad::check_lp_values(m, {{"a", 2}, {"b", 1}}).objective, 3.0, 1e-12);
}

TEST(ParseLp, Garbage) {
  std::istringstream in("Minimize\n obj: 2 a +\nEnd\n");
  EXPECT_THROW(lad::parse_lp(in), lad::ParseError);
}

TEST(AssignmentValues, ReadAndCheck) {
  const lad::Scenario s = fixtures::table2_fixture();
  const auto c = euclid_cache(s);
  const lad::Solution sol = lad::solve_exact(s, c, {});
  fixtures::TempDir dir;
  std::ostringstream text;
  text << "# solver output\n";
  for (const auto& [name, value] : lad::lp_values_for(s, c, sol)) text << name << " " << value << "\n";
  const auto path = dir.write("values.txt", text.str());
  const auto values = lad::read_lp_values(path);
  const lad::AssignmentCheck check = lad::check_assignment_values(s, c, values);
  EXPECT_TRUE(check.feasible);
  EXPECT_NEAR(check.total_cost, sol.total_cost, 1e-9);

  auto broken = values;
  broken.erase("x_0_0");
  broken.erase("x_1_0");
  broken.erase("x_2_0");
  EXPECT_FALSE(lad::check_assignment_values(s, c, broken).feasible);
}

}  // namespace
