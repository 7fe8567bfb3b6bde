#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "lad/error.hpp"
#include "lad/exact.hpp"
#include "lad/geo.hpp"
#include "lad/greedy.hpp"
#include "lad/segments.hpp"
#include "oracle.hpp"

namespace {

lad::SegmentCache euclid_cache(const lad::Scenario& s, double circuity = 1.3) {
  lad::EuclideanProvider p(circuity, 40.0);
  return lad::precompute_segments(s, p);
}

TEST(VehicleRouteCost, ObjectiveTerm) {
  // Home on the depot, g1 at 5 km, g2 another 5 km on, 10 km back: 20 km.
  lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}, {0, 10}}, {{0, 0}});
  s.groups[0].t_delivery = 600;
  s.groups[1].t_delivery = 900;
  const auto c = euclid_cache(s, 1.0);
  const lad::VehicleCost vc = lad::vehicle_route_cost(s.vehicles[0], {"g1", "g2"}, c, s);
  ASSERT_TRUE(vc.feasible());
  EXPECT_DOUBLE_EQ(vc.stats.d_tot, 20.0);
  EXPECT_DOUBLE_EQ(vc.stats.t_wait, 1500.0);
  EXPECT_NEAR(vc.stats.cost, 2.195, 1e-12);
}

TEST(VehicleRouteCost, CapacityExceeded) {
  lad::Scenario s = fixtures::layout({0, 0}, {{1, 1}}, {{0, 0}});
  for (int i = 0; i < 7; ++i) {
    s.customers.push_back({"x" + std::to_string(i), {1, 1}});
    s.groups[0].members.push_back("x" + std::to_string(i));
  }
  s.vehicles[0].cap = 7;
  const auto c = euclid_cache(s);
  EXPECT_EQ(lad::vehicle_route_cost(s.vehicles[0], {"g1"}, c, s).status,
            lad::Infeasibility::kCapacity);
}

TEST(VehicleRouteCost, NoFuel) {
  lad::Scenario s = fixtures::layout({0, 0}, {{1, 1}}, {{0, 0}});
  s.vehicles[0].f_avail = 0;
  s.vehicles[0].f_mob = 0.03;
  const auto c = euclid_cache(s);
  EXPECT_EQ(lad::vehicle_route_cost(s.vehicles[0], {"g1"}, c, s).status, lad::Infeasibility::kFuel);
}

TEST(VehicleRouteCost, NoTime) {
  lad::Scenario s = fixtures::layout({0, 0}, {{1, 1}}, {{0, 0}});
  s.vehicles[0].t_avail = 10;
  const auto c = euclid_cache(s);
  EXPECT_EQ(lad::vehicle_route_cost(s.vehicles[0], {"g1"}, c, s).status, lad::Infeasibility::kTime);
}

TEST(SolveExact, OneVehicleTakesBoth) {
  lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}, {4, 1}}, {{1, 1}});
  const auto c = euclid_cache(s);
  const lad::Solution sol = lad::solve_exact(s, c, {});
  ASSERT_EQ(sol.routes.size(), 1u);
  const lad::VehicleCost vc = lad::vehicle_route_cost(s.vehicles[0], {"g1", "g2"}, c, s);
  EXPECT_EQ(sol.total_cost, vc.stats.cost);
  EXPECT_TRUE(sol.proven_optimal);
  EXPECT_TRUE(sol.uncovered.empty());
}

TEST(SolveExact, ZeroBudgetIsBudgetInfeasible) {
  lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}}, {{1, 1}});
  s.budget = 0;
  const auto c = euclid_cache(s);
  try {
    lad::solve_exact(s, c, {});
    FAIL();
  } catch (const lad::InfeasibleError& e) {
    EXPECT_EQ(e.kind(), lad::InfeasibleKind::kBudget);
  }
}

TEST(SolveExact, ResourceInfeasible) {
  lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}}, {{1, 1}});
  s.vehicles[0].t_avail = 1;
  const auto c = euclid_cache(s);
  try {
    lad::solve_exact(s, c, {});
    FAIL();
  } catch (const lad::InfeasibleError& e) {
    EXPECT_EQ(e.kind(), lad::InfeasibleKind::kResource);
  }
}

// Three vehicles, four groups: all 3^4 assignments by enumeration.
TEST(SolveExact, ThreeByFourMatchesEnumeration) {
  std::mt19937_64 rng(2024);
  fixtures::RandomSpec spec;
  spec.min_vehicles = spec.max_vehicles = 3;
  spec.min_groups = spec.max_groups = 4;
  spec.tight = false;
  for (int i = 0; i < 10; ++i) {
    const lad::Scenario s = fixtures::random_instance(rng, spec);
    const auto opt = oracle::exhaustive_optimum(s, oracle::euclid(1.3, 40.0));
    ASSERT_TRUE(opt.has_value());
    EXPECT_EQ(lad::solve_exact(s, euclid_cache(s), {}).total_cost, opt->total_cost);
  }
}

TEST(SolveExact, OracleEquivalenceIncludingInfeasible) {
  std::mt19937_64 rng(77);
  int feasible = 0;
  for (int i = 0; i < 60; ++i) {
    const lad::Scenario s = fixtures::random_instance(rng);
    const auto opt = oracle::exhaustive_optimum(s, oracle::euclid(1.3, 40.0));
    const auto c = euclid_cache(s);
    if (!opt) {
      EXPECT_THROW(lad::solve_exact(s, c, {}), lad::InfeasibleError);
      continue;
    }
    ++feasible;
    const lad::Solution sol = lad::solve_exact(s, c, {});
    EXPECT_EQ(sol.total_cost, opt->total_cost);
    EXPECT_TRUE(oracle::check_solution(s, sol, oracle::euclid(1.3, 40.0)).empty());
  }
  EXPECT_GT(feasible, 20);
}

TEST(SolveExact, PruningDoesNotChangeTheCost) {
  std::mt19937_64 rng(78);
  for (int i = 0; i < 40; ++i) {
    const lad::Scenario s = fixtures::random_instance(rng);
    const auto c = euclid_cache(s);
    lad::ExactConfig off;
    off.pruning = false;
    off.warm_start = false;
    try {
      const double a = lad::solve_exact(s, c, {}).total_cost;
      EXPECT_EQ(a, lad::solve_exact(s, c, off).total_cost);
    } catch (const lad::InfeasibleError&) {
      EXPECT_THROW(lad::solve_exact(s, c, off), lad::InfeasibleError);
    }
  }
}

TEST(SolveExact, AddingAVehicleNeverCostsMore) {
  std::mt19937_64 rng(79);
  fixtures::RandomSpec spec;
  spec.min_vehicles = 2;
  for (int i = 0; i < 40; ++i) {
    const lad::Scenario s = fixtures::random_instance(rng, spec);
    const lad::Scenario fewer = lad::with_fleet(s, s.vehicles.size() - 1);
    double small = 0;
    try {
      small = lad::solve_exact(fewer, euclid_cache(fewer), {}).total_cost;
    } catch (const lad::InfeasibleError&) {
      continue;
    }
    EXPECT_LE(lad::solve_exact(s, euclid_cache(s), {}).total_cost, small);
  }
}

TEST(SolveExact, ReloadLetsOneSmallVehicleServeEverything) {
  lad::Scenario s = fixtures::layout({0, 0}, {{0, 2}, {2, 0}, {1, 1}}, {{0, 0}});
  s.vehicles[0].cap = 1;
  const auto c = euclid_cache(s);
  EXPECT_THROW(lad::solve_exact(s, c, {}), lad::InfeasibleError);
  lad::ExactConfig cfg;
  cfg.allow_reload = true;
  const lad::Solution sol = lad::solve_exact(s, c, cfg);
  ASSERT_EQ(sol.routes.size(), 1u);
  EXPECT_EQ(sol.routes[0].trips.size(), 3u);
  EXPECT_TRUE(oracle::check_solution(s, sol, oracle::euclid(1.3, 40.0)).empty());
}

TEST(SolveExact, ReloadNeverWorseThanSingleTrip) {
  std::mt19937_64 rng(80);
  lad::ExactConfig reload;
  reload.allow_reload = true;
  for (int i = 0; i < 30; ++i) {
    const lad::Scenario s = fixtures::random_instance(rng);
    const auto c = euclid_cache(s);
    try {
      const double single = lad::solve_exact(s, c, {}).total_cost;
      EXPECT_LE(lad::solve_exact(s, c, reload).total_cost, single);
    } catch (const lad::InfeasibleError&) {
    }
  }
}

TEST(SolveExact, TimeLimitKeepsAnIncumbent) {
  std::mt19937_64 rng(5);
  fixtures::RandomSpec spec;
  spec.min_vehicles = spec.max_vehicles = 8;
  spec.min_groups = spec.max_groups = 14;
  spec.tight = false;
  const lad::Scenario s = fixtures::random_instance(rng, spec);
  lad::ExactConfig cfg;
  cfg.time_limit_s = 0.0;
  cfg.allow_reload = true;
  const lad::Solution sol = lad::solve_exact(s, euclid_cache(s), cfg);
  EXPECT_TRUE(sol.time_limit_reached);
  EXPECT_FALSE(sol.proven_optimal);
  // The greedy warm start is the incumbent.
  EXPECT_TRUE(sol.uncovered.empty());
  EXPECT_TRUE(oracle::check_solution(s, sol, oracle::euclid(1.3, 40.0)).empty());
}

TEST(SolveExact, TimeLimitWithoutIncumbentLeavesAllUncovered) {
  std::mt19937_64 rng(5);
  fixtures::RandomSpec spec;
  spec.min_vehicles = spec.max_vehicles = 8;
  spec.min_groups = spec.max_groups = 14;
  spec.tight = false;
  const lad::Scenario s = fixtures::random_instance(rng, spec);
  lad::ExactConfig cfg;
  cfg.time_limit_s = 0.0;
  cfg.warm_start = false;
  const lad::Solution sol = lad::solve_exact(s, euclid_cache(s), cfg);
  EXPECT_TRUE(sol.time_limit_reached);
  EXPECT_EQ(sol.uncovered.size(), s.groups.size());
  EXPECT_TRUE(sol.routes.empty());
}

TEST(SolveExact, Deterministic) {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 10; ++i) {
    const lad::Scenario s = fixtures::random_instance(rng);
    const auto c = euclid_cache(s);
    try {
      EXPECT_EQ(lad::solve_exact(s, c, {}), lad::solve_exact(s, c, {}));
    } catch (const lad::InfeasibleError&) {
    }
  }
}

TEST(SolveExact, CacheMismatchRejected) {
  const lad::Scenario s = fixtures::layout({0, 0}, {{0, 5}}, {{1, 1}});
  const lad::Scenario other = fixtures::layout({0, 0}, {{0, 5}, {1, 1}}, {{1, 1}});
  EXPECT_THROW(lad::solve_exact(s, euclid_cache(other), {}), lad::ValidationError);
}

}  // namespace
