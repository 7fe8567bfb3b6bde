#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lad/model.hpp"
#include "lad/segments.hpp"
#include "lad/seqsolve.hpp"

namespace lad {

enum class Infeasibility { kNone, kCapacity, kFuel, kTime };

std::string_view to_string(Infeasibility r);

// Capacity per trip, then fuel and time over the whole route.
Infeasibility check_vehicle(const Vehicle& v, const RouteStats& stats,
                            std::span<const int> trip_loads);

struct VehicleCost {
  RouteStats stats;
  IndexTrip order;  // visiting order chosen by best_sequence
  Infeasibility status = Infeasibility::kNone;
  bool exact_sequence = true;

  bool feasible() const { return status == Infeasibility::kNone; }
};

// Cost of one vehicle serving `groups` in a single trip.
VehicleCost vehicle_route_cost(const Vehicle& v, std::size_t vehicle,
                               std::span<const std::size_t> groups, const SegmentCache& cache,
                               const Scenario& s);
VehicleCost vehicle_route_cost(const Vehicle& v, const std::vector<std::string>& group_ids,
                               const SegmentCache& cache, const Scenario& s);

inline constexpr std::size_t kMaxExactGroups = 256;

struct ExactConfig {
  double time_limit_s = 300.0;
  // Lets a vehicle run several depot-anchored trips sharing its time and fuel.
  bool allow_reload = false;
  // Bound-based pruning. Feasibility pruning stays on either way.
  bool pruning = true;
  // Seed the incumbent with the greedy solution when it is representable.
  bool warm_start = true;
};

struct ExactStats {
  std::uint64_t nodes = 0;
  std::uint64_t tours_evaluated = 0;
};

// Branch and bound over group -> (vehicle, trip) assignments. Returns the
// minimum-cost assignment covering every group within the budget; proven
// optimal unless the time limit cut the search short, in which case the
// best incumbent is returned with time_limit_reached set (all groups
// uncovered if none was found). Throws InfeasibleError when the search
// completes without a feasible assignment.
Solution solve_exact(const Scenario& s, const SegmentCache& cache, const ExactConfig& config,
                     ExactStats* stats = nullptr);

}  // namespace lad
