#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lad/exact.hpp"
#include "lad/geo.hpp"
#include "lad/greedy.hpp"
#include "lad/grouping.hpp"
#include "lad/metrics.hpp"
#include "lad/model.hpp"

namespace lad {

// Default per-type vehicle parameters. Costs, fuel stock and capacity are the
// simulation defaults for the three vehicle classes; consumption rates,
// availability and loading time are our own choices.
struct TypeDefaults {
  double c_mob;
  double c_stop;
  double f_avail;
  int cap;
  double f_mob;
  double f_stop;
};

const TypeDefaults& type_defaults(VehicleType t);

inline constexpr double kBudgetPerCustomerUsd = 5.99;

struct GenConfig {
  int n_customers = 500;
  int n_vehicles = 50;
  double box_km = 20.0;
  // Relative weights of type1, type2, type3.
  std::array<double, 3> type_mix = {1.0, 1.0, 1.0};
  std::uint64_t seed = 0;
  double t_avail_s = 12 * 3600.0;
  double t_load_s = kDefaultLoadTimeS;
  int n_drones = kDefaultDronesPerVehicle;
  std::optional<double> budget_usd;  // default 5.99 per customer
};

std::vector<std::string> validate_gen_config(const GenConfig& c);

// Customers and vehicle homes uniform in [0, box]^2, depot at the centre.
// Groups are not built. Deterministic per seed.
Scenario generate_scenario(const GenConfig& config);

// Builds groups (when the scenario has none) and fills their delivery
// times using the smallest drone count in the fleet.
void ensure_groups(Scenario& s, GroupingConfig config);

struct BenchConfig {
  std::vector<std::filesystem::path> scenarios;
  std::vector<std::size_t> fleet_sizes;  // empty = whole pool
  std::vector<Algorithm> algorithms = {Algorithm::kGreedy};
  TravelModel travel;
  ExactConfig exact;
  GreedyConfig greedy;
  GroupingConfig grouping;
  double profit_share = 0.5;
  int workers = 1;
  bool record_runtime = true;
};

// One row per (scenario, fleet size, algorithm) in that nesting order.
// Failures are recorded in the row's status; the run continues.
std::vector<ReportRow> run_bench(const BenchConfig& config);

void write_report(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report(const std::filesystem::path& path, const std::vector<ReportRow>& rows);

}  // namespace lad
