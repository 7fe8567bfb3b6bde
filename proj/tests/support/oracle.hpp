#pragma once

// Reference implementations used by the tests. Nothing here calls into the
// solver, sequencing or segment code: distances come straight from the
// coordinates and every search is plain enumeration.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lad/model.hpp"

namespace oracle {

// Road leg between two points: distance in km and time in s.
struct Leg {
  std::function<double(const lad::Point&, const lad::Point&)> km;
  std::function<double(const lad::Point&, const lad::Point&)> s;
};

// circuity * straight line; time = distance * 3600 / speed.
Leg euclid(double circuity, double speed_kmh);

// Shortest depot-anchored tour over `nodes` by trying every permutation.
// `d[i][j]` with node 0 the depot. Lengths are summed left to right.
struct BruteTour {
  std::vector<int> order;
  double length = 0.0;
};
BruteTour brute_force_tour(const std::vector<std::vector<double>>& d, std::vector<int> nodes);

// Cheapest single-trip assignment of every group to a vehicle, trying all
// |V|^|G| assignments. nullopt when none satisfies capacity, fuel, time and
// budget.
struct Assignment {
  double total_cost = 0.0;
  std::vector<int> vehicle_of;  // per group
};
std::optional<Assignment> exhaustive_optimum(const lad::Scenario& s, const Leg& leg);

// Minimum makespan by trying every job -> machine assignment.
double brute_force_makespan(const std::vector<double>& jobs, int machines);

// Re-checks a solution against the model constraints from scratch:
// (1) each group served at most once and accounted for exactly once;
// (3) per-trip parcel count within capacity; (4) fuel; (5) time;
// (2) total cost within budget when every group is covered. Also checks the
// reported per-vehicle figures and total against recomputed ones.
std::vector<std::string> check_solution(const lad::Scenario& s, const lad::Solution& sol,
                                        const Leg& leg, double rel_tol = 1e-9);

}  // namespace oracle
