#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lad/model.hpp"

namespace lad {

struct GroupingConfig {
  double drone_range_km = 5.0;
  int max_group_size = 10;
  std::optional<int> target_groups;  // defaults to ceil(|D| / max_group_size)
  std::uint64_t seed = 0;
  int max_rounds = 50;
};

// Partitions customers into drone-coverable groups.
//
// Seeded capacity-constrained k-means: farthest-point initialisation, then
// alternate nearest-centroid assignment (with at most max_group_size members
// per centroid) and centroid recomputation until the assignment stops
// changing or max_rounds is hit. Members left outside the drone range are
// moved into another group with room when one is close enough; any group
// still out of range is split. Waiting location is the member centroid.
// Group ids are "g" + zero-padded index. t_delivery is left at zero; see
// assign_delivery_times.
std::vector<Group> build_groups(std::span<const Customer> customers, const GroupingConfig& config);

// Drone sortie durations (s) for every member, one parcel per sortie.
std::vector<double> sortie_durations(const Group& g, const CustomerIndex& customers,
                                     double drone_speed_kmh, double service_time_s);

// Minimum makespan of `jobs` on `machines` identical machines. Exact subset
// dynamic program up to kExactMakespanJobs jobs, LPT list scheduling beyond.
inline constexpr std::size_t kExactMakespanJobs = 10;
double min_makespan(std::span<const double> jobs, int machines);
double lpt_makespan(std::span<const double> jobs, int machines);

// Drone-delivery completion time of a group served from its waiting location.
double group_delivery_time(const Group& g, const CustomerIndex& customers, int n_drones,
                           double drone_speed_kmh, double service_time_s);

// Fills t_delivery for every group of `s` using the scenario's drone spec
// and `n_drones` drones per vehicle.
void assign_delivery_times(Scenario& s, int n_drones);

}  // namespace lad
