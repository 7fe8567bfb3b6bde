#include "lad/seqsolve.hpp"

#include <algorithm>
#include <limits>

#include "lad/error.hpp"

namespace lad {

namespace {

std::vector<std::size_t> sorted_by_id(const SegmentCache& cache, std::span<const std::size_t> groups) {
  std::vector<std::size_t> out(groups.begin(), groups.end());
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return cache.group_id(a) < cache.group_id(b);
  });
  return out;
}

void check_indices(const SegmentCache& cache, std::span<const std::size_t> groups) {
  for (std::size_t g : groups)
    if (g >= cache.n_groups()) throw ValidationError({"unknown group index " + std::to_string(g)});
}

std::vector<IndexTrip> to_index_trips(const SegmentCache& cache, const std::vector<Trip>& trips) {
  std::vector<IndexTrip> out;
  out.reserve(trips.size());
  for (const auto& t : trips) {
    IndexTrip it;
    it.reserve(t.size());
    for (const auto& id : t) it.push_back(cache.group_index(id));
    out.push_back(std::move(it));
  }
  return out;
}

}  // namespace

double trip_distance(const SegmentCache& cache, std::span<const std::size_t> trip) {
  if (trip.empty()) return 0.0;
  double d = cache.d_fw(trip.front());
  for (std::size_t i = 0; i + 1 < trip.size(); ++i) d += cache.d_ww(trip[i], trip[i + 1]);
  d += cache.d_wf(trip.back());
  return d;
}

double trip_time(const SegmentCache& cache, std::span<const std::size_t> trip) {
  if (trip.empty()) return 0.0;
  double t = cache.t_fw(trip.front());
  for (std::size_t i = 0; i + 1 < trip.size(); ++i) t += cache.t_ww(trip[i], trip[i + 1]);
  t += cache.t_wf(trip.back());
  return t;
}

Tour held_karp(const SegmentCache& cache, std::span<const std::size_t> groups) {
  const std::size_t n = groups.size();
  if (n == 0) return Tour{};
  if (n > kExactSequenceLimit)
    throw ValidationError({"held_karp: at most " + std::to_string(kExactSequenceLimit) + " groups"});
  const std::vector<std::size_t> ids = sorted_by_id(cache, groups);
  if (n == 1) return Tour{{ids[0]}, trip_distance(cache, ids), true};

  const std::size_t full = (std::size_t{1} << n) - 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::uint8_t kNone = 0xFF;
  // cost[mask * n + j]: shortest depot-rooted path over `mask` ending at j,
  // summed left to right exactly as trip_distance does.
  std::vector<double> cost((full + 1) * n, kInf);
  std::vector<std::uint8_t> parent((full + 1) * n, kNone);
  for (std::size_t j = 0; j < n; ++j) cost[(std::size_t{1} << j) * n + j] = cache.d_fw(ids[j]);

  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      const double here = cost[mask * n + j];
      if (here == kInf) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = here + cache.d_ww(ids[j], ids[k]);
        if (cand < cost[next * n + k]) {
          cost[next * n + k] = cand;
          parent[next * n + k] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }

  double best = kInf;
  std::size_t last = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double cand = cost[full * n + j] + cache.d_wf(ids[j]);
    if (cand < best) {
      best = cand;
      last = j;
    }
  }

  Tour tour;
  tour.order.resize(n);
  std::size_t mask = full;
  std::size_t j = last;
  for (std::size_t pos = n; pos-- > 0;) {
    tour.order[pos] = ids[j];
    const std::uint8_t p = parent[mask * n + j];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  tour.length_km = best;
  tour.exact = true;
  return tour;
}

Tour nearest_neighbor_tour(const SegmentCache& cache, std::span<const std::size_t> groups) {
  std::vector<std::size_t> left = sorted_by_id(cache, groups);
  Tour tour;
  tour.exact = false;
  bool at_depot = true;
  std::size_t cur = 0;
  while (!left.empty()) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < left.size(); ++i) {
      const double d = at_depot ? cache.d_fw(left[i]) : cache.d_ww(cur, left[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    cur = left[best];
    at_depot = false;
    tour.order.push_back(cur);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(best));
  }
  tour.length_km = trip_distance(cache, tour.order);
  return tour;
}

Tour two_opt(const SegmentCache& cache, Tour tour) {
  const std::size_t n = tour.order.size();
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        IndexTrip cand = tour.order;
        std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                     cand.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        const double len = trip_distance(cache, cand);
        if (len < tour.length_km - 1e-12) {
          tour.order = std::move(cand);
          tour.length_km = len;
          improved = true;
        }
      }
    }
  }
  tour.exact = false;
  return tour;
}

Tour best_sequence(const SegmentCache& cache, std::span<const std::size_t> groups) {
  if (groups.empty()) throw ValidationError({"best_sequence: need at least one group"});
  check_indices(cache, groups);
  if (groups.size() <= kExactSequenceLimit) return held_karp(cache, groups);
  return two_opt(cache, nearest_neighbor_tour(cache, groups));
}

std::vector<std::string> best_sequence(const SegmentCache& cache,
                                       const std::vector<std::string>& group_ids) {
  std::vector<std::size_t> idx;
  idx.reserve(group_ids.size());
  for (const auto& id : group_ids) idx.push_back(cache.group_index(id));
  Tour t = best_sequence(cache, idx);
  std::vector<std::string> out;
  for (std::size_t g : t.order) out.push_back(cache.group_id(g));
  return out;
}

double route_distance(const SegmentCache& cache, std::size_t vehicle,
                      std::span<const IndexTrip> trips) {
  if (trips.empty()) return 0.0;
  double d = cache.d_vf(vehicle);
  for (const auto& trip : trips) {
    if (trip.empty()) throw ValidationError({"route_distance: empty trip"});
    check_indices(cache, trip);
    d += trip_distance(cache, trip);
  }
  d += cache.d_fv(vehicle);
  return d;
}

double route_distance(const Vehicle& v, const std::vector<Trip>& trips, const SegmentCache& cache) {
  const auto idx = to_index_trips(cache, trips);
  return route_distance(cache, cache.vehicle_index(v.id), idx);
}

RouteTime route_time(const Vehicle& v, std::size_t vehicle, std::span<const IndexTrip> trips,
                     const SegmentCache& cache, std::span<const Group> groups) {
  RouteTime out;
  if (trips.empty()) return out;
  double t = cache.t_vf(vehicle);
  std::vector<std::size_t> visited;
  for (const auto& trip : trips) {
    if (trip.empty()) throw ValidationError({"route_time: empty trip"});
    check_indices(cache, trip);
    t += v.t_load;
    t += trip_time(cache, trip);
    visited.insert(visited.end(), trip.begin(), trip.end());
  }
  // Summed in group order so the result does not depend on visiting order.
  std::sort(visited.begin(), visited.end());
  for (std::size_t g : visited) out.t_wait += groups[g].t_delivery;
  t += cache.t_fv(vehicle);
  out.t_tot = t + out.t_wait;
  return out;
}

RouteTime route_time(const Vehicle& v, const std::vector<Trip>& trips, const SegmentCache& cache,
                     std::span<const Group> groups) {
  const auto idx = to_index_trips(cache, trips);
  return route_time(v, cache.vehicle_index(v.id), idx, cache, groups);
}

RouteStats evaluate_route(const Vehicle& v, std::size_t vehicle, std::span<const IndexTrip> trips,
                          const SegmentCache& cache, std::span<const Group> groups) {
  RouteStats s;
  s.d_tot = route_distance(cache, vehicle, trips);
  const RouteTime rt = route_time(v, vehicle, trips, cache, groups);
  s.t_wait = rt.t_wait;
  s.t_tot = rt.t_tot;
  s.fuel_used = v.f_mob * s.d_tot + v.f_stop * s.t_wait;
  s.cost = v.c_mob * s.d_tot + v.c_stop * s.t_wait;
  return s;
}

}  // namespace lad
