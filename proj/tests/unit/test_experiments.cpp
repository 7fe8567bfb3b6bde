#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lad/error.hpp"
#include "lad/experiments.hpp"
#include "tmpdir.hpp"

namespace {

TEST(TypeDefaults, TableValues) {
  const auto& t1 = lad::type_defaults(lad::VehicleType::kType1);
  const auto& t3 = lad::type_defaults(lad::VehicleType::kType3);
  EXPECT_EQ(t1.c_mob, 0.10);
  EXPECT_EQ(t1.c_stop, 0.00013);
  EXPECT_EQ(t1.cap, 7);
  EXPECT_EQ(t3.f_avail, 23.0);
  EXPECT_EQ(t3.cap, 14);
}

TEST(Generate, DeterministicPerSeed) {
  lad::GenConfig c;
  c.n_customers = 60;
  c.n_vehicles = 8;
  c.seed = 42;
  const lad::Scenario a = lad::generate_scenario(c);
  const lad::Scenario b = lad::generate_scenario(c);
  EXPECT_EQ(lad::scenario_to_json(a).dump(), lad::scenario_to_json(b).dump());
  c.seed = 43;
  EXPECT_NE(lad::scenario_to_json(lad::generate_scenario(c)).dump(), lad::scenario_to_json(a).dump());
}

TEST(Generate, ShapeAndDefaults) {
  lad::GenConfig c;
  c.n_customers = 100;
  c.n_vehicles = 10;
  c.type_mix = {0, 0, 1};
  const lad::Scenario s = lad::generate_scenario(c);
  EXPECT_EQ(s.customers.size(), 100u);
  EXPECT_EQ(s.vehicles.size(), 10u);
  EXPECT_TRUE(s.groups.empty());
  EXPECT_NEAR(s.budget, 599.0, 1e-9);
  EXPECT_EQ(s.depot.x, 10.0);
  EXPECT_EQ(s.customers.front().id, "c000");
  for (const auto& v : s.vehicles) {
    EXPECT_EQ(v.type, lad::VehicleType::kType3);
    EXPECT_EQ(v.cap, 14);
    EXPECT_EQ(v.f_avail, 23.0);
    EXPECT_GE(v.home.x, 0.0);
    EXPECT_LE(v.home.x, 20.0);
  }
}

TEST(Generate, RejectsBadConfig) {
  lad::GenConfig c;
  c.n_customers = 0;
  EXPECT_FALSE(lad::validate_gen_config(c).empty());
  EXPECT_THROW(lad::generate_scenario(c), lad::ValidationError);
  c.n_customers = 10;
  c.type_mix = {0, 0, 0};
  EXPECT_THROW(lad::generate_scenario(c), lad::ValidationError);
}

TEST(EnsureGroups, BuildsValidGroupsOnce) {
  lad::GenConfig c;
  c.n_customers = 80;
  c.n_vehicles = 5;
  c.seed = 5;
  lad::Scenario s = lad::generate_scenario(c);
  lad::ensure_groups(s, {});
  EXPECT_FALSE(s.groups.empty());
  EXPECT_TRUE(lad::validate_scenario(s).empty());
  const auto before = s.groups;
  lad::GroupingConfig other;
  other.target_groups = 3;
  lad::ensure_groups(s, other);
  EXPECT_EQ(s.groups, before);
}

TEST(Bench, RowsInNestingOrderAndReproducible) {
  fixtures::TempDir dir;
  lad::GenConfig c;
  c.n_customers = 40;
  c.n_vehicles = 6;
  std::vector<std::filesystem::path> paths;
  for (std::uint64_t seed : {1, 2}) {
    c.seed = seed;
    lad::Scenario s = lad::generate_scenario(c);
    lad::ensure_groups(s, {});
    paths.push_back(dir / ("s" + std::to_string(seed) + ".json"));
    lad::save_scenario(s, paths.back());
  }
  lad::BenchConfig b;
  b.scenarios = paths;
  b.fleet_sizes = {2, 4, 9};
  b.algorithms = {lad::Algorithm::kGreedy, lad::Algorithm::kExact};
  b.exact.time_limit_s = 2;
  b.record_runtime = false;
  b.workers = 2;
  const auto rows = lad::run_bench(b);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].scenario_id, "gen-s1-c40-v6");
  EXPECT_EQ(rows[0].fleet_size, 2u);
  EXPECT_EQ(rows[0].algorithm, "greedy");
  EXPECT_EQ(rows[1].algorithm, "exact");
  EXPECT_EQ(rows[4].fleet_size, 9u);
  EXPECT_EQ(rows[4].status.rfind("error:", 0), 0u);
  EXPECT_EQ(rows[6].scenario_id, "gen-s2-c40-v6");

  std::ostringstream a, again;
  lad::write_report(a, rows);
  lad::write_report(again, lad::run_bench(b));
  EXPECT_EQ(a.str(), again.str());
}

}  // namespace
