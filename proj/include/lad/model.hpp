#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace lad {

// Planar position in kilometers.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double straight_line_km(const Point& a, const Point& b);

enum class VehicleType { kType1, kType2, kType3, kCustom };

std::string_view to_string(VehicleType t);
VehicleType vehicle_type_from_string(std::string_view s);

inline constexpr double kDefaultLoadTimeS = 600.0;
inline constexpr int kDefaultDronesPerVehicle = 3;

// A candidate autonomous vehicle. Money in USD, distance km, time s, fuel gal.
struct Vehicle {
  std::string id;
  Point home;
  VehicleType type = VehicleType::kCustom;
  double c_mob = 0.0;   // USD per km in motion
  double c_stop = 0.0;  // USD per second parked
  int cap = 1;          // parcels per trip
  double t_avail = 0.0;
  double f_avail = 0.0;
  double f_mob = 0.0;   // gal per km
  double f_stop = 0.0;  // gal per second
  double t_load = kDefaultLoadTimeS;
  int n_drones = kDefaultDronesPerVehicle;

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

struct Customer {
  std::string id;
  Point position;

  friend bool operator==(const Customer&, const Customer&) = default;
};

struct Group {
  std::string id;
  std::vector<std::string> members;
  Point waiting_location;
  double t_delivery = 0.0;

  int size() const { return static_cast<int>(members.size()); }

  friend bool operator==(const Group&, const Group&) = default;
};

struct DroneSpec {
  double speed_kmh = 60.0;
  double range_km = 5.0;  // one-way
  double service_time_s = 60.0;

  friend bool operator==(const DroneSpec&, const DroneSpec&) = default;
};

struct Scenario {
  std::string id;  // optional free-form label, empty when absent
  Point depot;
  double budget = 0.0;
  DroneSpec drone;
  std::vector<Vehicle> vehicles;
  std::vector<Customer> customers;
  std::vector<Group> groups;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Returns every invariant violation; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

// Parses and validates. Throws ParseError or ValidationError.
Scenario scenario_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// Same scenario restricted to the first `n` vehicles.
Scenario with_fleet(const Scenario& s, std::size_t n);

// Customer id -> position lookup.
using CustomerIndex = std::unordered_map<std::string, Point>;
CustomerIndex index_customers(const std::vector<Customer>& customers);

// ---------------------------------------------------------------------------
// Solutions

enum class Algorithm { kExact, kGreedy };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view s);

struct RouteStats {
  double d_tot = 0.0;
  double t_wait = 0.0;
  double t_tot = 0.0;
  double fuel_used = 0.0;
  double cost = 0.0;

  friend bool operator==(const RouteStats&, const RouteStats&) = default;
};

using Trip = std::vector<std::string>;

struct VehicleRoute {
  std::string vehicle_id;
  std::vector<Trip> trips;
  RouteStats stats;

  friend bool operator==(const VehicleRoute&, const VehicleRoute&) = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Solution {
  // Participating vehicles only, in scenario vehicle order.
  std::vector<VehicleRoute> routes;
  double total_cost = 0.0;
  std::vector<std::string> uncovered;
  Algorithm algorithm = Algorithm::kGreedy;
  bool proven_optimal = false;
  bool time_limit_reached = false;
  // False when some trip was sequenced heuristically (too many groups for
  // exact sequencing).
  bool sequencing_exact = true;
  Provenance provenance;

  const VehicleRoute* route_for(std::string_view vehicle_id) const;
  bool full_coverage() const { return uncovered.empty(); }
  std::size_t n_participating() const { return routes.size(); }

  friend bool operator==(const Solution&, const Solution&) = default;
};

nlohmann::ordered_json solution_to_json(const Solution& sol);
Solution solution_from_json(const nlohmann::ordered_json& doc);

Solution load_solution(const std::filesystem::path& path);
void save_solution(const Solution& sol, const std::filesystem::path& path);

// Stable 64-bit FNV-1a digest rendered as 16 hex digits.
std::string config_hash(std::string_view canonical_text);

}  // namespace lad
