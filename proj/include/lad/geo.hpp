#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lad/model.hpp"

namespace lad {

// A named location the vehicles drive between. Ids follow the convention
// "f" for the depot, "w:<group id>" for waiting locations and
// "v:<vehicle id>" for vehicle homes.
struct Site {
  std::string id;
  Point position;
};

inline constexpr const char* kDepotSiteId = "f";
std::string waiting_site_id(std::string_view group_id);
std::string home_site_id(std::string_view vehicle_id);

// Every site a scenario's routes can touch: depot, waiting locations, homes.
std::vector<Site> scenario_sites(const Scenario& s);

enum class ProviderKind { kEuclidean, kMatrix, kHttpTable };

std::string_view to_string(ProviderKind k);
ProviderKind provider_kind_from_string(std::string_view s);

inline constexpr double kDefaultCircuity = 1.3;
inline constexpr double kDefaultVehicleSpeedKmh = 40.0;

// Configuration of the travel provider.
struct TravelModel {
  ProviderKind provider = ProviderKind::kEuclidean;
  double circuity = kDefaultCircuity;
  double vehicle_speed_kmh = kDefaultVehicleSpeedKmh;
  std::optional<std::filesystem::path> matrix_source;
  std::optional<std::string> endpoint;  // http://host:port/path
  int http_max_retries = 2;
  double http_timeout_s = 10.0;
};

std::vector<std::string> validate_travel_model(const TravelModel& m);

// Maps site pairs to road distance (km) and travel time (s).
class TravelProvider {
 public:
  virtual ~TravelProvider() = default;

  virtual double distance_km(const Site& a, const Site& b) const = 0;
  virtual double travel_time_s(const Site& a, const Site& b) const = 0;

  // Announces the sites that will be queried. Table-backed providers fetch
  // everything in one batch here.
  virtual void register_sites(std::span<const Site> sites) { (void)sites; }
};

// circuity * straight-line distance; time = distance / speed.
class EuclideanProvider final : public TravelProvider {
 public:
  EuclideanProvider(double circuity, double speed_kmh);

  double distance_km(const Site& a, const Site& b) const override;
  double travel_time_s(const Site& a, const Site& b) const override;

 private:
  double circuity_;
  double speed_kmh_;
};

// Dense distance/duration tables keyed by site id.
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::vector<std::string> ids, std::vector<double> distances_km,
                std::vector<double> durations_s);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  double distance_km(std::size_t i, std::size_t j) const { return dist_[i * ids_.size() + j]; }
  double duration_s(std::size_t i, std::size_t j) const { return dur_[i * ids_.size() + j]; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> dist_;
  std::vector<double> dur_;
};

// Matrix CSV layout: a block whose header row is `distances_km,<id>,...`
// followed by one row per site `<id>,<v>,...`, then a second block headed
// `durations_s,<id>,...` with the same ids in the same order. Values are
// written with 17 significant digits so they read back bit-exact.
DistanceTable read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const DistanceTable& table, const std::filesystem::path& path);

// Builds a table by querying `provider` for every ordered pair of `sites`.
DistanceTable tabulate(const TravelProvider& provider, std::span<const Site> sites);

class MatrixProvider final : public TravelProvider {
 public:
  explicit MatrixProvider(DistanceTable table);
  static MatrixProvider from_file(const std::filesystem::path& path);

  double distance_km(const Site& a, const Site& b) const override;
  double travel_time_s(const Site& a, const Site& b) const override;
  void register_sites(std::span<const Site> sites) override;

 private:
  std::pair<std::size_t, std::size_t> lookup(const Site& a, const Site& b) const;

  DistanceTable table_;
};

// Client for a routing "table" service: POST {"sites":[[x,y],...]} and
// receive {"distances_km":[[...]],"durations_s":[[...]]}. Failed requests
// are retried `max_retries` times, then reported.
class HttpTableProvider final : public TravelProvider {
 public:
  HttpTableProvider(std::string endpoint, int max_retries = 2, double timeout_s = 10.0);

  double distance_km(const Site& a, const Site& b) const override;
  double travel_time_s(const Site& a, const Site& b) const override;
  void register_sites(std::span<const Site> sites) override;

  // Number of HTTP requests issued so far, retries included.
  int requests_issued() const;

 private:
  std::pair<std::size_t, std::size_t> lookup(const Site& a, const Site& b) const;

  std::string host_;
  int port_ = 80;
  std::string path_;
  int max_retries_;
  double timeout_s_;

  mutable std::mutex mu_;
  std::vector<Site> sites_;
  DistanceTable table_;
  int requests_ = 0;
};

std::unique_ptr<TravelProvider> make_provider(const TravelModel& m);

}  // namespace lad
