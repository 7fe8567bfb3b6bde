#include "lad/grouping.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "lad/error.hpp"

namespace lad {

namespace {

using Cluster = std::vector<std::size_t>;  // customer indices, ascending

Point centroid_of(std::span<const Customer> customers, const Cluster& members) {
  double sx = 0.0, sy = 0.0;
  for (std::size_t i : members) {
    sx += customers[i].position.x;
    sy += customers[i].position.y;
  }
  const auto n = static_cast<double>(members.size());
  return Point{sx / n, sy / n};
}

bool within_range(std::span<const Customer> customers, const Cluster& members, double range) {
  const Point c = centroid_of(customers, members);
  return std::all_of(members.begin(), members.end(), [&](std::size_t i) {
    return straight_line_km(c, customers[i].position) <= range;
  });
}

std::vector<Point> farthest_point_init(std::span<const Customer> customers, std::size_t k,
                                       std::mt19937_64& rng) {
  const std::size_t n = customers.size();
  std::vector<Point> centroids;
  centroids.reserve(k);
  // Plain modulo keeps the draw identical across standard libraries.
  centroids.push_back(customers[static_cast<std::size_t>(rng() % n)].position);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centroids.size() < k) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], straight_line_km(customers[i].position, centroids.back()));
      if (nearest[i] > best_d) {
        best_d = nearest[i];
        best = i;
      }
    }
    centroids.push_back(customers[best].position);
  }
  return centroids;
}

// Capacity-constrained nearest-centroid assignment. Every centroid first
// receives its nearest free customer so no cluster comes out empty, then the
// remaining (customer, centroid) pairs are taken in order of distance.
std::vector<std::size_t> assign(std::span<const Customer> customers,
                                const std::vector<Point>& centroids, int max_size) {
  const std::size_t n = customers.size();
  const std::size_t k = centroids.size();
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(n, kFree);
  std::vector<int> load(k, 0);

  for (std::size_t j = 0; j < k; ++j) {
    std::size_t best = kFree;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (owner[i] != kFree) continue;
      const double d = straight_line_km(customers[i].position, centroids[j]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    owner[best] = j;
    load[j] = 1;
  }

  struct Pair {
    double d;
    std::size_t customer;
    std::size_t centroid;
  };
  std::vector<Pair> pairs;
  pairs.reserve((n - k) * k);
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] != kFree) continue;
    for (std::size_t j = 0; j < k; ++j)
      pairs.push_back({straight_line_km(customers[i].position, centroids[j]), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.customer != b.customer) return a.customer < b.customer;
    return a.centroid < b.centroid;
  });
  for (const auto& p : pairs) {
    if (owner[p.customer] != kFree || load[p.centroid] >= max_size) continue;
    owner[p.customer] = p.centroid;
    ++load[p.centroid];
  }
  return owner;
}

std::vector<Cluster> clusters_from(const std::vector<std::size_t>& owner, std::size_t k) {
  std::vector<Cluster> out(k);
  for (std::size_t i = 0; i < owner.size(); ++i) out[owner[i]].push_back(i);
  return out;
}

// Moves out-of-range members to another cluster with room whose centroid
// stays in range for all of its members after the move.
void relocate_violators(std::span<const Customer> customers, std::vector<Cluster>& clusters,
                        double range, int max_size) {
  for (int pass = 0; pass < 10; ++pass) {
    bool moved = false;
    for (std::size_t g = 0; g < clusters.size(); ++g) {
      if (clusters[g].size() <= 1) continue;
      const Point c = centroid_of(customers, clusters[g]);
      // Farthest violator first.
      std::size_t worst = clusters[g].size();
      double worst_d = range;
      for (std::size_t m = 0; m < clusters[g].size(); ++m) {
        const double d = straight_line_km(c, customers[clusters[g][m]].position);
        if (d > worst_d) {
          worst_d = d;
          worst = m;
        }
      }
      if (worst == clusters[g].size()) continue;
      const std::size_t cust = clusters[g][worst];

      std::size_t best = clusters.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t h = 0; h < clusters.size(); ++h) {
        if (h == g || static_cast<int>(clusters[h].size()) >= max_size) continue;
        Cluster trial = clusters[h];
        trial.insert(std::lower_bound(trial.begin(), trial.end(), cust), cust);
        if (!within_range(customers, trial, range)) continue;
        const double d = straight_line_km(centroid_of(customers, clusters[h]),
                                          customers[cust].position);
        if (d < best_d) {
          best_d = d;
          best = h;
        }
      }
      if (best == clusters.size()) continue;
      clusters[g].erase(clusters[g].begin() + static_cast<std::ptrdiff_t>(worst));
      auto& dst = clusters[best];
      dst.insert(std::lower_bound(dst.begin(), dst.end(), cust), cust);
      moved = true;
    }
    if (!moved) return;
  }
}

// Two-means split seeded at the farthest pair, repeated until every piece is
// in range. Singletons are always in range (centroid == member).
void split_until_in_range(std::span<const Customer> customers, Cluster cluster, double range,
                          std::vector<Cluster>& out) {
  if (within_range(customers, cluster, range)) {
    out.push_back(std::move(cluster));
    return;
  }
  assert(cluster.size() >= 2);
  std::size_t a = 0, b = 1;
  double far = -1.0;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    for (std::size_t j = i + 1; j < cluster.size(); ++j) {
      const double d =
          straight_line_km(customers[cluster[i]].position, customers[cluster[j]].position);
      if (d > far) {
        far = d;
        a = i;
        b = j;
      }
    }
  }
  Point ca = customers[cluster[a]].position;
  Point cb = customers[cluster[b]].position;
  Cluster left, right;
  for (int round = 0; round < 20; ++round) {
    Cluster l, r;
    for (std::size_t i : cluster) {
      const Point& p = customers[i].position;
      (straight_line_km(p, ca) <= straight_line_km(p, cb) ? l : r).push_back(i);
    }
    if (l.empty() || r.empty()) break;
    if (l == left && r == right) break;
    left = std::move(l);
    right = std::move(r);
    ca = centroid_of(customers, left);
    cb = centroid_of(customers, right);
  }
  if (left.empty() || right.empty()) {
    left.assign(cluster.begin(), cluster.begin() + static_cast<std::ptrdiff_t>(cluster.size() / 2));
    right.assign(cluster.begin() + static_cast<std::ptrdiff_t>(cluster.size() / 2), cluster.end());
  }
  split_until_in_range(customers, std::move(left), range, out);
  split_until_in_range(customers, std::move(right), range, out);
}

std::string group_id(std::size_t index, std::size_t count) {
  std::string digits = std::to_string(index + 1);
  const std::size_t width = std::max<std::size_t>(3, std::to_string(count).size());
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "g" + digits;
}

}  // namespace

std::vector<Group> build_groups(std::span<const Customer> customers, const GroupingConfig& config) {
  const std::size_t n = customers.size();
  if (n == 0) throw ValidationError({"build_groups: no customers"});
  if (!(config.drone_range_km > 0.0)) throw ValidationError({"build_groups: drone_range must be > 0"});
  if (config.max_group_size < 1) throw ValidationError({"build_groups: max_group_size must be >= 1"});
  const auto max_size = static_cast<std::size_t>(config.max_group_size);
  const std::size_t k = config.target_groups
                            ? static_cast<std::size_t>(std::max(0, *config.target_groups))
                            : (n + max_size - 1) / max_size;
  if (k < 1 || k > n)
    throw ValidationError({"build_groups: target_groups must be in [1, " + std::to_string(n) + "]"});
  if (k * max_size < n)
    throw ValidationError({"build_groups: " + std::to_string(k) + " groups of at most " +
                           std::to_string(max_size) + " cannot hold " + std::to_string(n) +
                           " customers"});

  std::mt19937_64 rng(config.seed);
  std::vector<Point> centroids = farthest_point_init(customers, k, rng);
  std::vector<std::size_t> owner;
  for (int round = 0; round < config.max_rounds; ++round) {
    auto next = assign(customers, centroids, config.max_group_size);
    if (next == owner) break;
    owner = std::move(next);
    auto clusters = clusters_from(owner, k);
    for (std::size_t j = 0; j < k; ++j) centroids[j] = centroid_of(customers, clusters[j]);
  }

  std::vector<Cluster> clusters = clusters_from(owner, k);
  relocate_violators(customers, clusters, config.drone_range_km, config.max_group_size);

  std::vector<Cluster> final_clusters;
  for (auto& c : clusters) {
    if (c.empty()) continue;
    split_until_in_range(customers, std::move(c), config.drone_range_km, final_clusters);
  }
  std::sort(final_clusters.begin(), final_clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.front() < b.front(); });

  std::vector<Group> groups;
  groups.reserve(final_clusters.size());
  for (std::size_t g = 0; g < final_clusters.size(); ++g) {
    Group grp;
    grp.id = group_id(g, final_clusters.size());
    for (std::size_t i : final_clusters[g]) grp.members.push_back(customers[i].id);
    grp.waiting_location = centroid_of(customers, final_clusters[g]);
    groups.push_back(std::move(grp));
  }
  return groups;
}

std::vector<double> sortie_durations(const Group& g, const CustomerIndex& customers,
                                     double drone_speed_kmh, double service_time_s) {
  if (!(drone_speed_kmh > 0.0)) throw ValidationError({"drone speed must be > 0"});
  std::vector<double> out;
  out.reserve(g.members.size());
  for (const auto& m : g.members) {
    auto it = customers.find(m);
    if (it == customers.end())
      throw ValidationError({"group '" + g.id + "': unknown customer id '" + m + "'"});
    const double d = straight_line_km(g.waiting_location, it->second);
    out.push_back(2.0 * d * 3600.0 / drone_speed_kmh + service_time_s);
  }
  return out;
}

double lpt_makespan(std::span<const double> jobs, int machines) {
  if (machines < 1) throw ValidationError({"makespan: need at least one drone"});
  std::vector<std::size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return jobs[a] > jobs[b]; });
  std::vector<double> load(static_cast<std::size_t>(machines), 0.0);
  for (std::size_t j : order) {
    auto it = std::min_element(load.begin(), load.end());
    *it += jobs[j];
  }
  return *std::max_element(load.begin(), load.end());
}

double min_makespan(std::span<const double> jobs, int machines) {
  if (machines < 1) throw ValidationError({"makespan: need at least one drone"});
  const std::size_t n = jobs.size();
  if (n == 0) return 0.0;
  if (n > kExactMakespanJobs) return lpt_makespan(jobs, machines);
  if (static_cast<std::size_t>(machines) >= n) return *std::max_element(jobs.begin(), jobs.end());

  const std::uint32_t full = (1u << n) - 1u;
  // Subset sums accumulated in ascending job order.
  std::vector<double> sum(full + 1, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int high = 31 - std::countl_zero(mask);
    sum[mask] = sum[mask & ~(1u << high)] + jobs[static_cast<std::size_t>(high)];
  }
  std::vector<double> prev(sum);  // one machine
  std::vector<double> cur(full + 1);
  for (int m = 2; m <= machines; ++m) {
    cur[0] = 0.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      // The subset containing the lowest job goes to one machine.
      const std::uint32_t low = mask & (~mask + 1u);
      const std::uint32_t rest = mask ^ low;
      double best = std::numeric_limits<double>::infinity();
      for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
        const std::uint32_t mine = sub | low;
        best = std::min(best, std::max(sum[mine], prev[mask ^ mine]));
        if (sub == 0) break;
      }
      cur[mask] = best;
    }
    std::swap(prev, cur);
  }
  return prev[full];
}

double group_delivery_time(const Group& g, const CustomerIndex& customers, int n_drones,
                           double drone_speed_kmh, double service_time_s) {
  auto sorties = sortie_durations(g, customers, drone_speed_kmh, service_time_s);
  return min_makespan(sorties, n_drones);
}

void assign_delivery_times(Scenario& s, int n_drones) {
  const CustomerIndex idx = index_customers(s.customers);
  for (auto& g : s.groups)
    g.t_delivery = group_delivery_time(g, idx, n_drones, s.drone.speed_kmh, s.drone.service_time_s);
}

}  // namespace lad
