#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lad/geo.hpp"
#include "lad/model.hpp"

namespace lad {

// Every distance (km) and time (s) segment a route can use, precomputed once
// per scenario. Internally index-based: vehicle i is scenario.vehicles[i],
// group g is scenario.groups[g]. Both travel directions are stored so
// asymmetric tables are represented faithfully.
class SegmentCache {
 public:
  SegmentCache() = default;

  std::size_t n_vehicles() const { return vehicle_ids_.size(); }
  std::size_t n_groups() const { return group_ids_.size(); }

  const std::string& vehicle_id(std::size_t v) const { return vehicle_ids_[v]; }
  const std::string& group_id(std::size_t g) const { return group_ids_[g]; }
  std::size_t vehicle_index(std::string_view id) const;  // throws on unknown id
  std::size_t group_index(std::string_view id) const;    // throws on unknown id

  // home -> depot and depot -> home
  double d_vf(std::size_t v) const { return d_vf_[v]; }
  double d_fv(std::size_t v) const { return d_fv_[v]; }
  double t_vf(std::size_t v) const { return t_vf_[v]; }
  double t_fv(std::size_t v) const { return t_fv_[v]; }
  // depot -> waiting location and back
  double d_fw(std::size_t g) const { return d_fw_[g]; }
  double d_wf(std::size_t g) const { return d_wf_[g]; }
  double t_fw(std::size_t g) const { return t_fw_[g]; }
  double t_wf(std::size_t g) const { return t_wf_[g]; }
  // waiting location -> waiting location
  double d_ww(std::size_t a, std::size_t b) const { return d_ww_[a * n_groups() + b]; }
  double t_ww(std::size_t a, std::size_t b) const { return t_ww_[a * n_groups() + b]; }

  // True when distances and times over {depot} ∪ waiting locations satisfy
  // the triangle inequality (to a 1e-9 relative slack), so adding a stop to
  // a tour never makes it shorter.
  bool metric() const { return metric_; }

  // The cache as a site table in the matrix CSV layout.
  DistanceTable to_table() const;
  // Rebuilds a cache for `s` from a table written by to_table() (or any
  // table covering the scenario's sites).
  static SegmentCache from_table(const Scenario& s, const DistanceTable& table);

  friend SegmentCache precompute_segments(const Scenario& s, TravelProvider& provider);

 private:
  void finish();

  std::vector<std::string> vehicle_ids_, group_ids_;
  std::unordered_map<std::string, std::size_t> vehicle_index_, group_index_;
  std::vector<double> d_vf_, d_fv_, t_vf_, t_fv_;
  std::vector<double> d_fw_, d_wf_, t_fw_, t_wf_;
  std::vector<double> d_ww_, t_ww_;
  bool metric_ = true;
};

// Queries the provider for every depot/waiting/home segment. Provider errors
// propagate with the offending site pair attached.
SegmentCache precompute_segments(const Scenario& s, TravelProvider& provider);

void dump_segments(const SegmentCache& cache, const std::filesystem::path& path);
SegmentCache load_segments(const Scenario& s, const std::filesystem::path& path);

}  // namespace lad
