#pragma once

#include <span>
#include <string>
#include <vector>

#include "lad/model.hpp"
#include "lad/segments.hpp"

namespace lad {

// Largest group count sequenced exactly (Held-Karp); above this a
// nearest-neighbour tour improved by 2-opt is used.
inline constexpr std::size_t kExactSequenceLimit = 12;

// Group indices in visiting order, depot-anchored at both ends.
using IndexTrip = std::vector<std::size_t>;

struct Tour {
  IndexTrip order;
  double length_km = 0.0;  // d_fw(first) + sum d_ww + d_wf(last)
  bool exact = true;
};

// Shortest depot -> groups -> depot tour. Ties go to the tour that is
// lexicographically smallest in group id.
Tour best_sequence(const SegmentCache& cache, std::span<const std::size_t> groups);
std::vector<std::string> best_sequence(const SegmentCache& cache,
                                       const std::vector<std::string>& group_ids);

// Held-Karp over arbitrary group sets of size <= kExactSequenceLimit.
Tour held_karp(const SegmentCache& cache, std::span<const std::size_t> groups);
// Nearest-neighbour seed and its 2-opt improvement.
Tour nearest_neighbor_tour(const SegmentCache& cache, std::span<const std::size_t> groups);
Tour two_opt(const SegmentCache& cache, Tour seed);

// Left-to-right sums over one trip, starting and ending at the depot.
double trip_distance(const SegmentCache& cache, std::span<const std::size_t> trip);
double trip_time(const SegmentCache& cache, std::span<const std::size_t> trip);

// d_vf + sum over trips of the trip distance + d_fv; 0 when there are no
// trips. Every trip is an independent depot-anchored tour (reload).
double route_distance(const SegmentCache& cache, std::size_t vehicle,
                      std::span<const IndexTrip> trips);
double route_distance(const Vehicle& v, const std::vector<Trip>& trips, const SegmentCache& cache);

struct RouteTime {
  double t_tot = 0.0;
  double t_wait = 0.0;
};

// t_wait = sum of t_delivery over visited groups (in group order); t_tot = t_vf + per trip
// (t_load + trip time) + t_fv + t_wait. Both zero when there are no trips.
RouteTime route_time(const Vehicle& v, std::size_t vehicle, std::span<const IndexTrip> trips,
                     const SegmentCache& cache, std::span<const Group> groups);
RouteTime route_time(const Vehicle& v, const std::vector<Trip>& trips, const SegmentCache& cache,
                     std::span<const Group> groups);

// Full accounting for one vehicle: distance, wait, time, fuel and cost
// c_mob * d_tot + c_stop * t_wait.
RouteStats evaluate_route(const Vehicle& v, std::size_t vehicle, std::span<const IndexTrip> trips,
                          const SegmentCache& cache, std::span<const Group> groups);

}  // namespace lad
