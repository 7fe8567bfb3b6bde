#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "lad/error.hpp"
#include "lad/grouping.hpp"
#include "oracle.hpp"

namespace {

std::vector<lad::Customer> uniform_customers(std::mt19937_64& rng, int n, double box) {
  std::uniform_real_distribution<double> u(0, box);
  std::vector<lad::Customer> out;
  for (int i = 0; i < n; ++i) out.push_back({"c" + std::to_string(i), {u(rng), u(rng)}});
  return out;
}

// Partition, size and range checks straight from the definitions.
void expect_valid_groups(const std::vector<lad::Customer>& customers,
                         const std::vector<lad::Group>& groups, double range, int max_size) {
  std::map<std::string, lad::Point> pos;
  for (const auto& c : customers) pos[c.id] = c.position;
  std::multiset<std::string> seen;
  std::set<std::string> ids;
  for (const auto& g : groups) {
    EXPECT_TRUE(ids.insert(g.id).second);
    ASSERT_FALSE(g.members.empty());
    EXPECT_LE(static_cast<int>(g.members.size()), max_size);
    double sx = 0, sy = 0;
    for (const auto& m : g.members) {
      seen.insert(m);
      sx += pos.at(m).x;
      sy += pos.at(m).y;
    }
    const double n = static_cast<double>(g.members.size());
    EXPECT_NEAR(g.waiting_location.x, sx / n, 1e-9);
    EXPECT_NEAR(g.waiting_location.y, sy / n, 1e-9);
    for (const auto& m : g.members)
      EXPECT_LE(std::hypot(pos.at(m).x - g.waiting_location.x, pos.at(m).y - g.waiting_location.y),
                range + 1e-12);
  }
  std::multiset<std::string> all;
  for (const auto& c : customers) all.insert(c.id);
  EXPECT_EQ(seen, all);
}

TEST(BuildGroups, TwoCloseCustomersShareACentroid) {
  const std::vector<lad::Customer> cs = {{"a", {0, 0}}, {"b", {0.2, 0}}};
  lad::GroupingConfig cfg;
  cfg.drone_range_km = 1.0;
  cfg.max_group_size = 7;
  const auto groups = lad::build_groups(cs, cfg);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_DOUBLE_EQ(groups[0].waiting_location.x, 0.1);
  EXPECT_DOUBLE_EQ(groups[0].waiting_location.y, 0.0);
}

TEST(BuildGroups, SingleCustomer) {
  const std::vector<lad::Customer> cs = {{"only", {3.5, -2}}};
  const auto groups = lad::build_groups(cs, {});
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].members, std::vector<std::string>{"only"});
  EXPECT_EQ(groups[0].waiting_location, (lad::Point{3.5, -2}));
}

TEST(BuildGroups, FiveHundredIntoEighty) {
  std::mt19937_64 rng(7);
  const auto cs = uniform_customers(rng, 500, 20.0);
  lad::GroupingConfig cfg;
  cfg.drone_range_km = 5.0;
  cfg.max_group_size = 10;
  cfg.target_groups = 80;
  cfg.seed = 7;
  const auto groups = lad::build_groups(cs, cfg);
  EXPECT_EQ(groups.size(), 80u);
  expect_valid_groups(cs, groups, 5.0, 10);
}

TEST(BuildGroups, PropertiesOnRandomInputs) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 120)(rng);
    const double box = std::uniform_real_distribution<double>(0.5, 40)(rng);
    const auto cs = uniform_customers(rng, n, box);
    lad::GroupingConfig cfg;
    cfg.drone_range_km = std::uniform_real_distribution<double>(0.3, 6)(rng);
    cfg.max_group_size = std::uniform_int_distribution<int>(1, 12)(rng);
    cfg.seed = rng();
    const auto groups = lad::build_groups(cs, cfg);
    expect_valid_groups(cs, groups, cfg.drone_range_km, cfg.max_group_size);
  }
}

TEST(BuildGroups, DeterministicPerSeed) {
  std::mt19937_64 rng(1);
  const auto cs = uniform_customers(rng, 200, 15.0);
  lad::GroupingConfig cfg;
  cfg.seed = 99;
  EXPECT_EQ(lad::build_groups(cs, cfg), lad::build_groups(cs, cfg));
}

TEST(BuildGroups, RejectsImpossibleTargets) {
  std::mt19937_64 rng(2);
  const auto cs = uniform_customers(rng, 30, 5.0);
  lad::GroupingConfig cfg;
  cfg.max_group_size = 5;
  cfg.target_groups = 4;  // 4 * 5 < 30
  EXPECT_THROW(lad::build_groups(cs, cfg), lad::ValidationError);
  cfg.target_groups = 31;
  EXPECT_THROW(lad::build_groups(cs, cfg), lad::ValidationError);
  EXPECT_THROW(lad::build_groups({}, {}), lad::ValidationError);
}

lad::Group ring_group(int members) {
  lad::Group g;
  g.id = "g";
  g.waiting_location = {0, 0};
  for (int i = 0; i < members; ++i) g.members.push_back("c" + std::to_string(i));
  return g;
}

lad::CustomerIndex ring_customers(int members, double radius) {
  lad::CustomerIndex idx;
  for (int i = 0; i < members; ++i) {
    const double a = 2.0 * 3.14159265358979 * i / members;
    idx["c" + std::to_string(i)] = {radius * std::cos(a), radius * std::sin(a)};
  }
  return idx;
}

TEST(DeliveryTime, ThreeSortiesOnThreeDrones) {
  EXPECT_NEAR(lad::group_delivery_time(ring_group(3), ring_customers(3, 0.5), 3, 30, 60), 180.0,
              1e-9);
}

TEST(DeliveryTime, ThreeSortiesOnOneDrone) {
  EXPECT_NEAR(lad::group_delivery_time(ring_group(3), ring_customers(3, 0.5), 1, 30, 60), 540.0,
              1e-9);
}

TEST(Makespan, FourSortiesOnTwoDrones) {
  const std::vector<double> jobs = {180, 180, 180, 60};
  EXPECT_EQ(lad::min_makespan(jobs, 2), 360.0);
  EXPECT_EQ(oracle::brute_force_makespan(jobs, 2), 360.0);
}

TEST(Makespan, EdgeCases) {
  EXPECT_EQ(lad::min_makespan(std::vector<double>{}, 3), 0.0);
  EXPECT_EQ(lad::min_makespan(std::vector<double>{42}, 1), 42.0);
  EXPECT_THROW(lad::min_makespan(std::vector<double>{1, 2}, 0), lad::ValidationError);
}

TEST(Makespan, DynamicProgramMatchesEnumeration) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dur(30, 600);
  for (int i = 0; i < 300; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int m = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<double> jobs(n);
    for (auto& j : jobs) j = dur(rng);
    EXPECT_EQ(lad::min_makespan(jobs, m), oracle::brute_force_makespan(jobs, m));
  }
}

TEST(Makespan, Bounds) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> dur(30, 600);
  for (int i = 0; i < 200; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 16)(rng);
    const int m = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<double> jobs(n);
    for (auto& j : jobs) j = dur(rng);
    const double t = lad::min_makespan(jobs, m);
    EXPECT_GE(t, *std::max_element(jobs.begin(), jobs.end()));
    EXPECT_LE(t, std::accumulate(jobs.begin(), jobs.end(), 0.0) + 1e-9);
    EXPECT_LE(t, lad::lpt_makespan(jobs, m) * (1 + 1e-12));
  }
}

TEST(AssignDeliveryTimes, FillsEveryGroup) {
  std::mt19937_64 rng(4);
  lad::Scenario s;
  s.customers = uniform_customers(rng, 40, 8.0);
  s.groups = lad::build_groups(s.customers, {});
  lad::assign_delivery_times(s, 2);
  for (const auto& g : s.groups) EXPECT_GT(g.t_delivery, 0.0);
}

}  // namespace
