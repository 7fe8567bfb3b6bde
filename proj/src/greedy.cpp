#include "lad/greedy.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <set>

#include "lad/error.hpp"

namespace lad {

std::vector<std::size_t> CostTree::path_to(int node) const {
  std::vector<std::size_t> path;
  for (int n = node; n > 0; n = nodes[static_cast<std::size_t>(n)].parent)
    path.push_back(nodes[static_cast<std::size_t>(n)].group);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Route totals if the vehicle committed `trip_dist`/`trip_time`/`wait` as its
// next trip and then went home.
bool completes_within_limits(const Vehicle& v, std::size_t vehicle, const VehicleProgress& p,
                             const SegmentCache& cache, double trip_dist, double trip_time,
                             double wait) {
  const double d_tot = cache.d_vf(vehicle) + p.trips_distance + trip_dist + cache.d_fv(vehicle);
  const double t_wait = p.t_wait + wait;
  const double t_tot =
      cache.t_vf(vehicle) + p.trips_time + v.t_load + trip_time + cache.t_fv(vehicle) + t_wait;
  const double fuel = v.f_mob * d_tot + v.f_stop * t_wait;
  return fuel <= v.f_avail && t_tot <= v.t_avail;
}

struct Partial {
  double dist = 0.0;  // depot -> ... -> current waiting location
  double time = 0.0;
  double wait = 0.0;
};

}  // namespace

CostTree build_tree(const Vehicle& v, std::size_t vehicle, const VehicleProgress& progress,
                    std::span<const std::size_t> remaining, const SegmentCache& cache,
                    const Scenario& s, const GreedyConfig& config) {
  CostTree tree;
  CostTree::Node root;
  root.remaining = v.cap;
  tree.nodes.push_back(root);

  const double fuel_used =
      progress.dispatched()
          ? v.f_mob * (cache.d_vf(vehicle) + progress.trips_distance + cache.d_fv(vehicle)) +
                v.f_stop * progress.t_wait
          : 0.0;
  if (!(v.f_avail - fuel_used > 0.0)) return tree;

  const double root_leg = progress.dispatched() ? cache.d_wf(progress.trips.back().back())
                                                : cache.d_vf(vehicle);
  const std::size_t limit = config.branch_limit
                                ? static_cast<std::size_t>(std::max(0, *config.branch_limit))
                                : std::numeric_limits<std::size_t>::max();

  struct Frame {
    int node;
    Partial partial;
    std::vector<bool> on_path;
  };
  std::vector<bool> none(cache.n_groups(), false);
  std::vector<Frame> stack{{0, {}, none}};

  struct Candidate {
    std::size_t group;
    double weight;
    Partial partial;
  };

  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const CostTree::Node here = tree.nodes[static_cast<std::size_t>(f.node)];

    std::vector<Candidate> cands;
    for (std::size_t g : remaining) {
      if (f.on_path[g]) continue;
      const Group& grp = s.groups[g];
      if (grp.size() > here.remaining) continue;
      const double leg_dist = f.node == 0 ? cache.d_fw(g) : cache.d_ww(here.group, g);
      const double leg_time = f.node == 0 ? cache.t_fw(g) : cache.t_ww(here.group, g);
      Partial next{f.partial.dist + leg_dist, f.partial.time + leg_time,
                   f.partial.wait + grp.t_delivery};
      if (!completes_within_limits(v, vehicle, progress, cache, next.dist + cache.d_wf(g),
                                   next.time + cache.t_wf(g), next.wait))
        continue;
      const double weight_dist = f.node == 0 ? root_leg + cache.d_fw(g) : leg_dist;
      const double weight = (weight_dist * v.c_mob + grp.t_delivery * v.c_stop) / grp.size();
      cands.push_back({g, weight, next});
    }
    std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.weight != b.weight) return a.weight < b.weight;
      return cache.group_id(a.group) < cache.group_id(b.group);
    });
    if (cands.size() > limit) cands.resize(limit);

    for (const auto& c : cands) {
      CostTree::Node child;
      child.group = c.group;
      child.parent = f.node;
      child.depth = here.depth + 1;
      child.remaining = here.remaining - s.groups[c.group].size();
      child.edge_weight = c.weight;
      child.path_cost = here.path_cost + c.weight;
      const int id = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(child);
      tree.nodes[static_cast<std::size_t>(f.node)].children.push_back(id);
      std::vector<bool> on_path = f.on_path;
      on_path[c.group] = true;
      stack.push_back({id, c.partial, std::move(on_path)});
    }
  }
  return tree;
}

std::optional<TreeChoice> tree_min_cost(const CostTree& tree, const SegmentCache& cache) {
  if (tree.empty()) return std::nullopt;
  int best = -1;
  std::vector<std::string> best_ids;
  for (std::size_t n = 1; n < tree.nodes.size(); ++n) {
    const auto& node = tree.nodes[n];
    if (!node.children.empty()) continue;
    if (best >= 0) {
      const auto& cur = tree.nodes[static_cast<std::size_t>(best)];
      if (node.path_cost > cur.path_cost) continue;
      if (node.path_cost == cur.path_cost) {
        if (node.depth > cur.depth) continue;
        if (node.depth == cur.depth) {
          std::vector<std::string> ids;
          for (std::size_t g : tree.path_to(static_cast<int>(n))) ids.push_back(cache.group_id(g));
          if (!(ids < best_ids)) continue;
          best = static_cast<int>(n);
          best_ids = std::move(ids);
          continue;
        }
      }
    }
    best = static_cast<int>(n);
    best_ids.clear();
    for (std::size_t g : tree.path_to(best)) best_ids.push_back(cache.group_id(g));
  }
  TreeChoice choice;
  choice.cost = tree.nodes[static_cast<std::size_t>(best)].path_cost;
  choice.path = tree.path_to(best);
  return choice;
}

void dump_tree(const CostTree& tree, const SegmentCache& cache, std::ostream& out) {
  out << "parent,child,weight\n";
  for (std::size_t n = 1; n < tree.nodes.size(); ++n) {
    const auto& node = tree.nodes[n];
    const std::string parent =
        node.parent == 0 ? std::string(kDepotSiteId)
                         : cache.group_id(tree.nodes[static_cast<std::size_t>(node.parent)].group);
    out << parent << ',' << cache.group_id(node.group) << ',' << node.edge_weight << '\n';
  }
}

Solution solve_greedy(const Scenario& s, const SegmentCache& cache, const GreedyConfig& config) {
  if (cache.n_groups() != s.groups.size() || cache.n_vehicles() != s.vehicles.size())
    throw ValidationError({"segment cache does not match the scenario"});

  const std::size_t nv = s.vehicles.size();
  std::vector<VehicleProgress> progress(nv);
  std::vector<double> accounted(nv, 0.0);
  std::set<std::size_t> remaining;
  for (std::size_t g = 0; g < s.groups.size(); ++g) remaining.insert(g);

  double c_acc = 0.0;
  while (!remaining.empty() && c_acc < s.budget) {
    const std::vector<std::size_t> open(remaining.begin(), remaining.end());
    std::optional<std::size_t> chosen;
    TreeChoice choice;
    for (std::size_t v = 0; v < nv; ++v) {
      const CostTree tree = build_tree(s.vehicles[v], v, progress[v], open, cache, s, config);
      auto c = tree_min_cost(tree, cache);
      if (!c) continue;
      if (!chosen || c->cost < choice.cost) {
        chosen = v;
        choice = std::move(*c);
      }
    }
    if (!chosen) break;

    const std::size_t v = *chosen;
    std::vector<IndexTrip> trips = progress[v].trips;
    trips.push_back(choice.path);
    const RouteStats after = evaluate_route(s.vehicles[v], v, trips, cache, s.groups);
    const double delta = after.cost - accounted[v];
    if (c_acc + delta > s.budget) break;

    c_acc += delta;
    accounted[v] = after.cost;
    VehicleProgress& p = progress[v];
    p.trips_distance += trip_distance(cache, choice.path);
    p.trips_time += s.vehicles[v].t_load + trip_time(cache, choice.path);
    for (std::size_t g : choice.path) {
      p.t_wait += s.groups[g].t_delivery;
      remaining.erase(g);
    }
    p.trips.push_back(std::move(choice.path));
  }

  Solution sol;
  sol.algorithm = Algorithm::kGreedy;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!progress[v].dispatched()) continue;
    VehicleRoute route;
    route.vehicle_id = s.vehicles[v].id;
    for (const auto& trip : progress[v].trips) {
      Trip ids;
      for (std::size_t g : trip) ids.push_back(cache.group_id(g));
      route.trips.push_back(std::move(ids));
    }
    route.stats = evaluate_route(s.vehicles[v], v, progress[v].trips, cache, s.groups);
    sol.total_cost += route.stats.cost;
    sol.routes.push_back(std::move(route));
  }
  for (std::size_t g : remaining) sol.uncovered.push_back(cache.group_id(g));
  return sol;
}

}  // namespace lad
