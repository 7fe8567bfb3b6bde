#include "lad/segments.hpp"

#include <cmath>
#include <limits>

#include "lad/error.hpp"

namespace lad {

std::size_t SegmentCache::vehicle_index(std::string_view id) const {
  auto it = vehicle_index_.find(std::string(id));
  if (it == vehicle_index_.end()) throw ValidationError({"unknown vehicle id '" + std::string(id) + "'"});
  return it->second;
}

std::size_t SegmentCache::group_index(std::string_view id) const {
  auto it = group_index_.find(std::string(id));
  if (it == group_index_.end()) throw ValidationError({"unknown group id '" + std::string(id) + "'"});
  return it->second;
}

void SegmentCache::finish() {
  for (std::size_t i = 0; i < vehicle_ids_.size(); ++i) vehicle_index_.emplace(vehicle_ids_[i], i);
  for (std::size_t i = 0; i < group_ids_.size(); ++i) group_index_.emplace(group_ids_[i], i);

  // Node 0 is the depot, node g+1 is group g.
  const std::size_t n = n_groups() + 1;
  auto dist = [&](std::size_t a, std::size_t b) {
    if (a == b) return 0.0;
    if (a == 0) return d_fw_[b - 1];
    if (b == 0) return d_wf_[a - 1];
    return d_ww(a - 1, b - 1);
  };
  auto time = [&](std::size_t a, std::size_t b) {
    if (a == b) return 0.0;
    if (a == 0) return t_fw_[b - 1];
    if (b == 0) return t_wf_[a - 1];
    return t_ww(a - 1, b - 1);
  };
  constexpr double kSlack = 1e-9;
  metric_ = true;
  for (std::size_t i = 0; i < n && metric_; ++i) {
    for (std::size_t j = 0; j < n && metric_; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist(i, k) > (dist(i, j) + dist(j, k)) * (1.0 + kSlack) + kSlack ||
            time(i, k) > (time(i, j) + time(j, k)) * (1.0 + kSlack) + kSlack) {
          metric_ = false;
          break;
        }
      }
    }
  }
}

SegmentCache precompute_segments(const Scenario& s, TravelProvider& provider) {
  const std::vector<Site> sites = scenario_sites(s);
  provider.register_sites(sites);

  auto query = [&](const Site& a, const Site& b, double& d, double& t) {
    try {
      d = provider.distance_km(a, b);
      t = provider.travel_time_s(a, b);
    } catch (const ProviderError& e) {
      throw ProviderError("segment (" + a.id + "," + b.id + "): " + e.what());
    }
  };

  SegmentCache c;
  const std::size_t nv = s.vehicles.size();
  const std::size_t ng = s.groups.size();
  const Site& depot = sites[0];
  auto wsite = [&](std::size_t g) -> const Site& { return sites[1 + g]; };
  auto vsite = [&](std::size_t v) -> const Site& { return sites[1 + ng + v]; };

  for (const auto& v : s.vehicles) c.vehicle_ids_.push_back(v.id);
  for (const auto& g : s.groups) c.group_ids_.push_back(g.id);

  c.d_vf_.resize(nv);
  c.d_fv_.resize(nv);
  c.t_vf_.resize(nv);
  c.t_fv_.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    query(vsite(v), depot, c.d_vf_[v], c.t_vf_[v]);
    query(depot, vsite(v), c.d_fv_[v], c.t_fv_[v]);
  }
  c.d_fw_.resize(ng);
  c.d_wf_.resize(ng);
  c.t_fw_.resize(ng);
  c.t_wf_.resize(ng);
  for (std::size_t g = 0; g < ng; ++g) {
    query(depot, wsite(g), c.d_fw_[g], c.t_fw_[g]);
    query(wsite(g), depot, c.d_wf_[g], c.t_wf_[g]);
  }
  c.d_ww_.assign(ng * ng, 0.0);
  c.t_ww_.assign(ng * ng, 0.0);
  for (std::size_t a = 0; a < ng; ++a) {
    for (std::size_t b = 0; b < ng; ++b) {
      if (a == b) continue;
      query(wsite(a), wsite(b), c.d_ww_[a * ng + b], c.t_ww_[a * ng + b]);
    }
  }
  c.finish();
  return c;
}

DistanceTable SegmentCache::to_table() const {
  const std::size_t nv = n_vehicles();
  const std::size_t ng = n_groups();
  const std::size_t n = 1 + ng + nv;
  std::vector<std::string> ids;
  ids.reserve(n);
  ids.emplace_back(kDepotSiteId);
  for (const auto& g : group_ids_) ids.push_back(waiting_site_id(g));
  for (const auto& v : vehicle_ids_) ids.push_back(home_site_id(v));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> dist(n * n, nan), dur(n * n, nan);
  auto set = [&](std::size_t i, std::size_t j, double d, double t) {
    dist[i * n + j] = d;
    dur[i * n + j] = t;
  };
  for (std::size_t i = 0; i < n; ++i) set(i, i, 0.0, 0.0);
  for (std::size_t g = 0; g < ng; ++g) {
    set(0, 1 + g, d_fw_[g], t_fw_[g]);
    set(1 + g, 0, d_wf_[g], t_wf_[g]);
    for (std::size_t h = 0; h < ng; ++h)
      if (g != h) set(1 + g, 1 + h, d_ww(g, h), t_ww(g, h));
  }
  for (std::size_t v = 0; v < nv; ++v) {
    set(1 + ng + v, 0, d_vf_[v], t_vf_[v]);
    set(0, 1 + ng + v, d_fv_[v], t_fv_[v]);
  }
  return DistanceTable(std::move(ids), std::move(dist), std::move(dur));
}

SegmentCache SegmentCache::from_table(const Scenario& s, const DistanceTable& table) {
  MatrixProvider provider(table);
  return precompute_segments(s, provider);
}

void dump_segments(const SegmentCache& cache, const std::filesystem::path& path) {
  write_matrix_csv(cache.to_table(), path);
}

SegmentCache load_segments(const Scenario& s, const std::filesystem::path& path) {
  return SegmentCache::from_table(s, read_matrix_csv(path));
}

}  // namespace lad
