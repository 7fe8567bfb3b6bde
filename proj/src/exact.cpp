#include "lad/exact.hpp"

#include <algorithm>
#include <bitset>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "lad/error.hpp"
#include "lad/greedy.hpp"

namespace lad {

std::string_view to_string(Infeasibility r) {
  switch (r) {
    case Infeasibility::kNone: return "feasible";
    case Infeasibility::kCapacity: return "capacity";
    case Infeasibility::kFuel: return "fuel";
    case Infeasibility::kTime: return "time";
  }
  return "feasible";
}

Infeasibility check_vehicle(const Vehicle& v, const RouteStats& stats,
                            std::span<const int> trip_loads) {
  for (int load : trip_loads)
    if (load > v.cap) return Infeasibility::kCapacity;
  if (v.f_mob * stats.d_tot + v.f_stop * stats.t_wait > v.f_avail) return Infeasibility::kFuel;
  if (stats.t_tot > v.t_avail) return Infeasibility::kTime;
  return Infeasibility::kNone;
}

VehicleCost vehicle_route_cost(const Vehicle& v, std::size_t vehicle,
                               std::span<const std::size_t> groups, const SegmentCache& cache,
                               const Scenario& s) {
  VehicleCost out;
  if (groups.empty()) return out;
  Tour tour = best_sequence(cache, groups);
  out.order = std::move(tour.order);
  out.exact_sequence = tour.exact;
  const std::vector<IndexTrip> trips{out.order};
  out.stats = evaluate_route(v, vehicle, trips, cache, s.groups);
  int load = 0;
  for (std::size_t g : groups) load += s.groups[g].size();
  const int loads[] = {load};
  out.status = check_vehicle(v, out.stats, loads);
  return out;
}

VehicleCost vehicle_route_cost(const Vehicle& v, const std::vector<std::string>& group_ids,
                               const SegmentCache& cache, const Scenario& s) {
  std::vector<std::size_t> idx;
  for (const auto& id : group_ids) idx.push_back(cache.group_index(id));
  return vehicle_route_cost(v, cache.vehicle_index(v.id), idx, cache, s);
}

namespace {

using Clock = std::chrono::steady_clock;
using GroupSet = std::bitset<kMaxExactGroups>;

struct TripState {
  GroupSet set;
  int load = 0;
  IndexTrip order;
  bool exact = true;
};

struct VehicleState {
  std::vector<TripState> trips;
  RouteStats stats;
  Infeasibility status = Infeasibility::kNone;

  bool used() const { return !trips.empty(); }
};

class Search {
 public:
  Search(const Scenario& s, const SegmentCache& cache, const ExactConfig& config,
         Clock::time_point deadline, ExactStats* stats)
      : s_(s), cache_(cache), config_(config), deadline_(deadline), stats_(stats),
        metric_(cache.metric()) {
    const std::size_t ng = s.groups.size();
    order_.resize(ng);
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (s.groups[a].size() != s.groups[b].size()) return s.groups[a].size() > s.groups[b].size();
      return s.groups[a].id < s.groups[b].id;
    });
    // Every group pays at least the cheapest vehicle's waiting cost.
    rest_bound_.assign(ng + 1, 0.0);
    for (std::size_t k = ng; k-- > 0;) {
      double cheapest = std::numeric_limits<double>::infinity();
      for (const auto& v : s.vehicles)
        cheapest = std::min(cheapest, v.c_stop * s.groups[order_[k]].t_delivery);
      if (s.vehicles.empty()) cheapest = 0.0;
      rest_bound_[k] = rest_bound_[k + 1] + cheapest;
    }
    state_.resize(s.vehicles.size());
  }

  // Runs the search keeping only assignments with total cost <= budget.
  void run(double budget) {
    budget_ = budget;
    dfs(0);
  }

  void seed(std::vector<VehicleState> assignment, double total) {
    best_ = std::move(assignment);
    best_total_ = total;
    found_ = true;
  }

  bool found() const { return found_; }
  bool timed_out() const { return timed_out_; }
  double best_total() const { return best_total_; }
  const std::vector<VehicleState>& best() const { return best_; }

  TripState make_trip(const GroupSet& set, int load) {
    TripState t;
    t.set = set;
    t.load = load;
    auto it = memo_.find(set);
    if (it == memo_.end()) {
      std::vector<std::size_t> groups;
      for (std::size_t g = 0; g < s_.groups.size(); ++g)
        if (set.test(g)) groups.push_back(g);
      Tour tour = best_sequence(cache_, groups);
      if (stats_) ++stats_->tours_evaluated;
      if (memo_.size() > kMemoLimit) memo_.clear();
      it = memo_.emplace(set, std::move(tour)).first;
    }
    t.order = it->second.order;
    t.exact = it->second.exact;
    return t;
  }

  void refresh(std::size_t v, VehicleState& st) const {
    if (st.trips.empty()) {
      st.stats = RouteStats{};
      st.status = Infeasibility::kNone;
      return;
    }
    std::vector<IndexTrip> trips;
    std::vector<int> loads;
    trips.reserve(st.trips.size());
    for (const auto& t : st.trips) {
      trips.push_back(t.order);
      loads.push_back(t.load);
    }
    st.stats = evaluate_route(s_.vehicles[v], v, trips, cache_, s_.groups);
    st.status = check_vehicle(s_.vehicles[v], st.stats, loads);
  }

  double total_of(const std::vector<VehicleState>& states) const {
    double total = 0.0;
    for (const auto& st : states)
      if (st.used()) total += st.stats.cost;
    return total;
  }

 private:
  static constexpr std::size_t kMemoLimit = 1u << 20;

  double partial_bound() const {
    double lb = 0.0;
    for (std::size_t v = 0; v < state_.size(); ++v) {
      const auto& st = state_[v];
      if (!st.used()) continue;
      if (metric_) {
        lb += st.stats.cost;
      } else {
        // Without the triangle inequality only the home legs and waiting
        // cost are guaranteed to persist.
        const Vehicle& veh = s_.vehicles[v];
        lb += veh.c_mob * (cache_.d_vf(v) + cache_.d_fv(v)) + veh.c_stop * st.stats.t_wait;
      }
    }
    return lb;
  }

  bool out_of_time() {
    if (timed_out_) return true;
    if ((clock_ticks_++ & 0xFF) == 0 && Clock::now() >= deadline_) timed_out_ = true;
    return timed_out_;
  }

  void dfs(std::size_t depth) {
    if (stats_) ++stats_->nodes;
    if (out_of_time()) return;

    if (depth == order_.size()) {
      for (const auto& st : state_)
        if (st.status != Infeasibility::kNone) return;
      const double total = total_of(state_);
      if (total <= budget_ && total < best_total_) {
        best_total_ = total;
        best_ = state_;
        found_ = true;
      }
      return;
    }

    if (config_.pruning) {
      const double cap = std::min(best_total_, budget_);
      const double lb = partial_bound() + rest_bound_[depth];
      if (lb > cap + 1e-9 * std::max(1.0, std::abs(cap))) return;
    }

    const std::size_t g = order_[depth];
    const int size = s_.groups[g].size();

    struct Child {
      double increment;
      std::size_t vehicle;
      std::size_t trip;  // == trips.size() for a new trip
      VehicleState next;
    };
    std::vector<Child> children;
    for (std::size_t v = 0; v < state_.size(); ++v) {
      const Vehicle& veh = s_.vehicles[v];
      const VehicleState& cur = state_[v];
      const std::size_t n_trips = cur.trips.size();
      for (std::size_t t = 0; t <= n_trips; ++t) {
        const bool fresh = t == n_trips;
        if (fresh && n_trips > 0 && !config_.allow_reload) continue;
        const int load = (fresh ? 0 : cur.trips[t].load) + size;
        if (load > veh.cap) continue;
        VehicleState next = cur;
        GroupSet set = fresh ? GroupSet{} : cur.trips[t].set;
        set.set(g);
        TripState trip = make_trip(set, load);
        if (fresh) {
          next.trips.push_back(std::move(trip));
        } else {
          next.trips[t] = std::move(trip);
        }
        refresh(v, next);
        if (metric_ && next.status != Infeasibility::kNone) continue;
        const double inc = next.stats.cost - (cur.used() ? cur.stats.cost : 0.0);
        children.push_back({inc, v, t, std::move(next)});
      }
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.increment < b.increment; });

    for (auto& child : children) {
      VehicleState saved = std::move(state_[child.vehicle]);
      state_[child.vehicle] = std::move(child.next);
      dfs(depth + 1);
      state_[child.vehicle] = std::move(saved);
      if (timed_out_) return;
    }
  }

  const Scenario& s_;
  const SegmentCache& cache_;
  const ExactConfig& config_;
  Clock::time_point deadline_;
  ExactStats* stats_;
  bool metric_;

  std::vector<std::size_t> order_;
  std::vector<double> rest_bound_;
  std::vector<VehicleState> state_;
  std::unordered_map<GroupSet, Tour> memo_;

  double budget_ = std::numeric_limits<double>::infinity();
  double best_total_ = std::numeric_limits<double>::infinity();
  std::vector<VehicleState> best_;
  bool found_ = false;
  bool timed_out_ = false;
  std::uint64_t clock_ticks_ = 0;
};

// The greedy assignment re-sequenced and re-costed under the exact model,
// if it covers everything and satisfies every constraint.
std::optional<std::pair<std::vector<VehicleState>, double>> greedy_incumbent(
    const Scenario& s, const SegmentCache& cache, const ExactConfig& config, Search& search) {
  const Solution greedy = solve_greedy(s, cache, GreedyConfig{});
  if (!greedy.full_coverage()) return std::nullopt;
  std::vector<VehicleState> states(s.vehicles.size());
  for (const auto& route : greedy.routes) {
    const std::size_t v = cache.vehicle_index(route.vehicle_id);
    std::vector<std::pair<GroupSet, int>> trips;
    for (const auto& trip : route.trips) {
      GroupSet set;
      int load = 0;
      for (const auto& id : trip) {
        const std::size_t g = cache.group_index(id);
        set.set(g);
        load += s.groups[g].size();
      }
      trips.emplace_back(set, load);
    }
    // Greedy opens a new trip every time it returns to a vehicle; without
    // reloads those trips are merged into one when the parcels fit.
    if (!config.allow_reload && trips.size() > 1) {
      GroupSet all;
      int load = 0;
      for (const auto& [set, n] : trips) {
        all |= set;
        load += n;
      }
      if (load > s.vehicles[v].cap) return std::nullopt;
      trips.assign(1, {all, load});
    }
    for (const auto& [set, load] : trips) states[v].trips.push_back(search.make_trip(set, load));
    search.refresh(v, states[v]);
    if (states[v].status != Infeasibility::kNone) return std::nullopt;
  }
  const double total = search.total_of(states);
  if (total > s.budget) return std::nullopt;
  return std::make_pair(std::move(states), total);
}

}  // namespace

Solution solve_exact(const Scenario& s, const SegmentCache& cache, const ExactConfig& config,
                     ExactStats* stats) {
  if (cache.n_groups() != s.groups.size() || cache.n_vehicles() != s.vehicles.size())
    throw ValidationError({"segment cache does not match the scenario"});
  if (s.groups.size() > kMaxExactGroups)
    throw ValidationError({"exact solver supports at most " + std::to_string(kMaxExactGroups) +
                           " groups"});

  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(std::max(0.0, config.time_limit_s)));

  Solution sol;
  sol.algorithm = Algorithm::kExact;

  Search search(s, cache, config, deadline, stats);
  if (config.warm_start && !s.groups.empty()) {
    if (auto seed = greedy_incumbent(s, cache, config, search))
      search.seed(std::move(seed->first), seed->second);
  }
  search.run(s.budget);

  if (!search.found()) {
    if (search.timed_out()) {
      sol.time_limit_reached = true;
      for (const auto& g : s.groups) sol.uncovered.push_back(g.id);
      return sol;
    }
    // Tell a budget shortfall apart from a resource shortfall.
    Search relaxed(s, cache, config, deadline, nullptr);
    relaxed.run(std::numeric_limits<double>::infinity());
    if (relaxed.found())
      throw InfeasibleError(InfeasibleKind::kBudget,
                            "cheapest assignment costs " +
                                std::to_string(relaxed.best_total()) + " USD, budget is " +
                                std::to_string(s.budget) + " USD");
    if (relaxed.timed_out()) {
      sol.time_limit_reached = true;
      for (const auto& g : s.groups) sol.uncovered.push_back(g.id);
      return sol;
    }
    throw InfeasibleError(InfeasibleKind::kResource,
                          "no assignment satisfies capacity, fuel and time limits");
  }

  sol.time_limit_reached = search.timed_out();
  sol.proven_optimal = !search.timed_out();
  const auto& best = search.best();
  for (std::size_t v = 0; v < best.size(); ++v) {
    if (!best[v].used()) continue;
    VehicleRoute route;
    route.vehicle_id = s.vehicles[v].id;
    for (const auto& trip : best[v].trips) {
      Trip ids;
      for (std::size_t g : trip.order) ids.push_back(cache.group_id(g));
      route.trips.push_back(std::move(ids));
      sol.sequencing_exact = sol.sequencing_exact && trip.exact;
    }
    route.stats = best[v].stats;
    sol.total_cost += route.stats.cost;
    sol.routes.push_back(std::move(route));
  }
  return sol;
}

}  // namespace lad
