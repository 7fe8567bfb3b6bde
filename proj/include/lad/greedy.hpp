#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lad/model.hpp"
#include "lad/segments.hpp"
#include "lad/seqsolve.hpp"

namespace lad {

struct GreedyConfig {
  // Children kept per tree node, cheapest edge first. nullopt = unlimited.
  std::optional<int> branch_limit = 4;
};

// What a vehicle has already committed in earlier greedy rounds.
struct VehicleProgress {
  std::vector<IndexTrip> trips;
  double trips_distance = 0.0;  // sum of trip distances so far
  double trips_time = 0.0;      // sum of (t_load + trip time) so far
  double t_wait = 0.0;

  bool dispatched() const { return !trips.empty(); }
};

// Selection tree for one vehicle. Node 0 is the depot root; every other node
// is a group reached with `remaining` parcels left after serving it.
struct CostTree {
  struct Node {
    std::size_t group = 0;  // unused for the root
    int parent = -1;
    int depth = 0;
    int remaining = 0;
    double edge_weight = 0.0;  // partial cost of reaching this node
    double path_cost = 0.0;    // sum of edge weights from the root
    std::vector<int> children;
  };

  std::vector<Node> nodes;

  bool empty() const { return nodes.size() <= 1; }
  std::vector<std::size_t> path_to(int node) const;  // group indices, root excluded
};

// Expands every group that fits the remaining parcels, skipping groups
// already on the path and nodes whose completed route would exceed the
// vehicle's time or fuel. Edge weight into group b from a is
// (d_ab * c_mob + t_b^delivery * c_stop) / |b|; the root edge uses
// d_vf + d_fw (first trip) or d_wf(last group) + d_fw (reload).
CostTree build_tree(const Vehicle& v, std::size_t vehicle, const VehicleProgress& progress,
                    std::span<const std::size_t> remaining, const SegmentCache& cache,
                    const Scenario& s, const GreedyConfig& config);

struct TreeChoice {
  double cost = 0.0;                // c_v: min path cost over terminal nodes
  std::vector<std::size_t> path;   // visiting order
};

// Cheapest terminal path. Ties go to the shorter path, then to the
// lexicographically smaller sequence of group ids. nullopt for an empty tree.
std::optional<TreeChoice> tree_min_cost(const CostTree& tree, const SegmentCache& cache);

// Edge list "parent,child,weight" with the root written as "f".
void dump_tree(const CostTree& tree, const SegmentCache& cache, std::ostream& out);

// Repeats: pick the vehicle with the cheapest tree path, commit the path as
// one trip, drop the covered groups. Stops when everything is covered, no
// vehicle can take another group, or the next commitment would push the
// accumulated cost over the budget.
Solution solve_greedy(const Scenario& s, const SegmentCache& cache, const GreedyConfig& config);

}  // namespace lad
