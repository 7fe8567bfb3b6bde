#include "lad/geo.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <httplib.h>

#include "lad/error.hpp"

namespace lad {

std::string waiting_site_id(std::string_view group_id) { return "w:" + std::string(group_id); }

std::string home_site_id(std::string_view vehicle_id) { return "v:" + std::string(vehicle_id); }

std::vector<Site> scenario_sites(const Scenario& s) {
  std::vector<Site> sites;
  sites.reserve(1 + s.groups.size() + s.vehicles.size());
  sites.push_back({kDepotSiteId, s.depot});
  for (const auto& g : s.groups) sites.push_back({waiting_site_id(g.id), g.waiting_location});
  for (const auto& v : s.vehicles) sites.push_back({home_site_id(v.id), v.home});
  return sites;
}

std::string_view to_string(ProviderKind k) {
  switch (k) {
    case ProviderKind::kEuclidean: return "euclidean";
    case ProviderKind::kMatrix: return "matrix";
    case ProviderKind::kHttpTable: return "http";
  }
  return "euclidean";
}

ProviderKind provider_kind_from_string(std::string_view s) {
  if (s == "euclidean") return ProviderKind::kEuclidean;
  if (s == "matrix") return ProviderKind::kMatrix;
  if (s == "http" || s == "http_table") return ProviderKind::kHttpTable;
  throw ParseError("unknown travel provider '" + std::string(s) + "'");
}

std::vector<std::string> validate_travel_model(const TravelModel& m) {
  std::vector<std::string> out;
  if (!(m.circuity >= 1.0) || !std::isfinite(m.circuity)) out.push_back("circuity must be >= 1");
  if (!(m.vehicle_speed_kmh > 0.0) || !std::isfinite(m.vehicle_speed_kmh))
    out.push_back("vehicle_speed must be > 0");
  if (m.provider == ProviderKind::kMatrix && !m.matrix_source)
    out.push_back("matrix provider requires matrix_source");
  if (m.provider == ProviderKind::kHttpTable && !m.endpoint)
    out.push_back("http provider requires endpoint");
  if (m.http_max_retries < 0) out.push_back("http_max_retries must be >= 0");
  return out;
}

// ---------------------------------------------------------------------------

EuclideanProvider::EuclideanProvider(double circuity, double speed_kmh)
    : circuity_(circuity), speed_kmh_(speed_kmh) {
  if (!(circuity >= 1.0)) throw ValidationError({"circuity must be >= 1"});
  if (!(speed_kmh > 0.0)) throw ValidationError({"vehicle_speed must be > 0"});
}

double EuclideanProvider::distance_km(const Site& a, const Site& b) const {
  return circuity_ * straight_line_km(a.position, b.position);
}

double EuclideanProvider::travel_time_s(const Site& a, const Site& b) const {
  return distance_km(a, b) * 3600.0 / speed_kmh_;
}

// ---------------------------------------------------------------------------

DistanceTable::DistanceTable(std::vector<std::string> ids, std::vector<double> distances_km,
                             std::vector<double> durations_s)
    : ids_(std::move(ids)), dist_(std::move(distances_km)), dur_(std::move(durations_s)) {
  const std::size_t n = ids_.size();
  if (dist_.size() != n * n || dur_.size() != n * n)
    throw ProviderError("distance table is not square over its site ids");
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(ids_[i], i).second)
      throw ProviderError("duplicate site id '" + ids_[i] + "' in distance table");
  }
  // NaN marks a segment the table does not carry.
  auto ok = [](double v) { return std::isnan(v) || (v >= 0.0 && std::isfinite(v)); };
  for (std::size_t k = 0; k < n * n; ++k) {
    if (!ok(dist_[k]) || !ok(dur_[k])) {
      throw ProviderError("distance table entry (" + ids_[k / n] + "," + ids_[k % n] +
                          ") is negative or infinite");
    }
  }
}

std::optional<std::size_t> DistanceTable::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t start = cell.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? std::string() : cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError(context + ": not a number '" + s + "'");
  return v;
}

std::string format_exact(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DistanceTable read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path.string() + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }

  std::size_t cursor = 0;
  std::vector<std::string> ids;
  auto read_block = [&](const std::string& tag) {
    const std::string where = path.string() + " (" + tag + " block)";
    if (cursor >= lines.size()) throw ParseError(where + ": missing");
    auto header = split_csv(lines[cursor]);
    if (header.empty() || header[0] != tag)
      throw ParseError(where + ": header must start with '" + tag + "'");
    std::vector<std::string> block_ids(header.begin() + 1, header.end());
    if (ids.empty()) {
      ids = block_ids;
    } else if (block_ids != ids) {
      throw ParseError(where + ": site ids differ from the distances block");
    }
    const std::size_t n = ids.size();
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t line_no = cursor + 1 + i;
      if (line_no >= lines.size()) throw ParseError(where + ": truncated");
      auto row = split_csv(lines[line_no]);
      if (row.size() != n + 1 || row[0] != ids[i])
        throw ParseError(where + ": row " + std::to_string(i + 1) + " must be '" + ids[i] +
                         "' followed by " + std::to_string(n) + " values");
      for (std::size_t j = 0; j < n; ++j)
        values[i * n + j] = parse_double(row[j + 1], where + " (" + ids[i] + "," + ids[j] + ")");
    }
    cursor += n + 1;
    return values;
  };
  auto dist = read_block("distances_km");
  auto dur = read_block("durations_s");
  return DistanceTable(std::move(ids), std::move(dist), std::move(dur));
}

void write_matrix_csv(const DistanceTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write matrix file '" + path.string() + "'");
  const std::size_t n = table.size();
  auto block = [&](const char* tag, bool distances) {
    out << tag;
    for (const auto& id : table.ids()) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      out << table.ids()[i];
      for (std::size_t j = 0; j < n; ++j)
        out << ',' << format_exact(distances ? table.distance_km(i, j) : table.duration_s(i, j));
      out << '\n';
    }
  };
  block("distances_km", true);
  block("durations_s", false);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

DistanceTable tabulate(const TravelProvider& provider, std::span<const Site> sites) {
  const std::size_t n = sites.size();
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& s : sites) ids.push_back(s.id);
  std::vector<double> dist(n * n), dur(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = provider.distance_km(sites[i], sites[j]);
      dur[i * n + j] = provider.travel_time_s(sites[i], sites[j]);
    }
  }
  return DistanceTable(std::move(ids), std::move(dist), std::move(dur));
}

// ---------------------------------------------------------------------------

MatrixProvider::MatrixProvider(DistanceTable table) : table_(std::move(table)) {}

MatrixProvider MatrixProvider::from_file(const std::filesystem::path& path) {
  return MatrixProvider(read_matrix_csv(path));
}

std::pair<std::size_t, std::size_t> MatrixProvider::lookup(const Site& a, const Site& b) const {
  auto i = table_.index_of(a.id);
  if (!i) throw ProviderError("matrix provider: unknown site '" + a.id + "'");
  auto j = table_.index_of(b.id);
  if (!j) throw ProviderError("matrix provider: unknown site '" + b.id + "'");
  return {*i, *j};
}

double MatrixProvider::distance_km(const Site& a, const Site& b) const {
  auto [i, j] = lookup(a, b);
  if (i == j) return 0.0;
  const double d = table_.distance_km(i, j);
  if (std::isnan(d)) throw ProviderError("matrix provider: no distance for (" + a.id + "," + b.id + ")");
  return d;
}

double MatrixProvider::travel_time_s(const Site& a, const Site& b) const {
  auto [i, j] = lookup(a, b);
  if (i == j) return 0.0;
  const double t = table_.duration_s(i, j);
  if (std::isnan(t)) throw ProviderError("matrix provider: no duration for (" + a.id + "," + b.id + ")");
  return t;
}

void MatrixProvider::register_sites(std::span<const Site> sites) {
  for (const auto& s : sites) {
    if (!table_.index_of(s.id)) throw ProviderError("matrix provider: unknown site '" + s.id + "'");
  }
}

// ---------------------------------------------------------------------------

HttpTableProvider::HttpTableProvider(std::string endpoint, int max_retries, double timeout_s)
    : max_retries_(max_retries), timeout_s_(timeout_s) {
  constexpr std::string_view kScheme = "http://";
  if (endpoint.rfind(kScheme, 0) != 0)
    throw ValidationError({"http endpoint must start with http:// ('" + endpoint + "')"});
  std::string rest = endpoint.substr(kScheme.size());
  auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    host_ = authority.substr(0, colon);
    port_ = std::stoi(authority.substr(colon + 1));
  } else {
    host_ = authority;
  }
  if (host_.empty()) throw ValidationError({"http endpoint has no host ('" + endpoint + "')"});
}

int HttpTableProvider::requests_issued() const {
  std::lock_guard lock(mu_);
  return requests_;
}

void HttpTableProvider::register_sites(std::span<const Site> sites) {
  std::lock_guard lock(mu_);
  bool missing = false;
  for (const auto& s : sites) missing = missing || !table_.index_of(s.id);
  if (!missing) return;

  // Re-request the union so the cached table stays a single dense block.
  std::vector<Site> request_sites;
  std::unordered_map<std::string, Point> known;
  for (const auto& s : sites_) {
    if (known.emplace(s.id, s.position).second) request_sites.push_back(s);
  }
  for (const auto& s : sites) {
    if (known.emplace(s.id, s.position).second) request_sites.push_back(s);
  }

  nlohmann::json body;
  body["sites"] = nlohmann::json::array();
  for (const auto& s : request_sites)
    body["sites"].push_back(nlohmann::json::array({s.position.x, s.position.y}));
  const std::string payload = body.dump();

  httplib::Client client(host_, port_);
  const auto secs = static_cast<time_t>(timeout_s_);
  const auto usecs = static_cast<time_t>((timeout_s_ - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);

  std::string last_error;
  for (int attempt = 0; attempt <= max_retries_; ++attempt) {
    ++requests_;
    auto res = client.Post(path_, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ProviderError("http table: malformed response body: " + std::string(e.what()));
    }
    const std::size_t n = request_sites.size();
    auto read_matrix = [&](const char* key) {
      auto it = doc.find(key);
      if (it == doc.end() || !it->is_array() || it->size() != n)
        throw ProviderError(std::string("http table: response field '") + key + "' must be a " +
                            std::to_string(n) + "x" + std::to_string(n) + " array");
      std::vector<double> values(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& row = (*it)[i];
        if (!row.is_array() || row.size() != n)
          throw ProviderError(std::string("http table: row ") + std::to_string(i) + " of '" + key +
                              "' has the wrong length");
        for (std::size_t j = 0; j < n; ++j) {
          if (!row[j].is_number())
            throw ProviderError(std::string("http table: non-numeric entry in '") + key + "'");
          values[i * n + j] = row[j].get<double>();
        }
      }
      return values;
    };
    auto dist = read_matrix("distances_km");
    auto dur = read_matrix("durations_s");
    std::vector<std::string> ids;
    for (const auto& s : request_sites) ids.push_back(s.id);
    try {
      table_ = DistanceTable(std::move(ids), std::move(dist), std::move(dur));
    } catch (const ValidationError& e) {
      throw ProviderError(std::string("http table: bad response: ") + e.what());
    }
    sites_ = std::move(request_sites);
    return;
  }
  throw ProviderError("http table request to " + host_ + ":" + std::to_string(port_) + path_ +
                      " failed after " + std::to_string(max_retries_ + 1) +
                      " attempts: " + last_error);
}

std::pair<std::size_t, std::size_t> HttpTableProvider::lookup(const Site& a, const Site& b) const {
  auto i = table_.index_of(a.id);
  if (!i) throw ProviderError("http table: site '" + a.id + "' was never registered");
  auto j = table_.index_of(b.id);
  if (!j) throw ProviderError("http table: site '" + b.id + "' was never registered");
  return {*i, *j};
}

double HttpTableProvider::distance_km(const Site& a, const Site& b) const {
  std::lock_guard lock(mu_);
  auto [i, j] = lookup(a, b);
  return i == j ? 0.0 : table_.distance_km(i, j);
}

double HttpTableProvider::travel_time_s(const Site& a, const Site& b) const {
  std::lock_guard lock(mu_);
  auto [i, j] = lookup(a, b);
  return i == j ? 0.0 : table_.duration_s(i, j);
}

// ---------------------------------------------------------------------------

std::unique_ptr<TravelProvider> make_provider(const TravelModel& m) {
  if (auto v = validate_travel_model(m); !v.empty()) throw ValidationError(std::move(v));
  switch (m.provider) {
    case ProviderKind::kEuclidean:
      return std::make_unique<EuclideanProvider>(m.circuity, m.vehicle_speed_kmh);
    case ProviderKind::kMatrix:
      return std::make_unique<MatrixProvider>(MatrixProvider::from_file(*m.matrix_source));
    case ProviderKind::kHttpTable:
      return std::make_unique<HttpTableProvider>(*m.endpoint, m.http_max_retries, m.http_timeout_s);
  }
  throw ValidationError({"unknown provider"});
}

}  // namespace lad
