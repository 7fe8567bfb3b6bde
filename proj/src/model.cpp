#include "lad/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lad/error.hpp"

namespace lad {

using Json = nlohmann::ordered_json;

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid input:";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

PartialCoverageError::PartialCoverageError(std::vector<std::string> uncovered)
    : Error([&] {
        std::string msg = "partial coverage, uncovered groups:";
        for (const auto& g : uncovered) msg += " " + g;
        return msg;
      }()),
      uncovered_(std::move(uncovered)) {}

double straight_line_km(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view to_string(VehicleType t) {
  switch (t) {
    case VehicleType::kType1: return "type1";
    case VehicleType::kType2: return "type2";
    case VehicleType::kType3: return "type3";
    case VehicleType::kCustom: return "custom";
  }
  return "custom";
}

VehicleType vehicle_type_from_string(std::string_view s) {
  if (s == "type1") return VehicleType::kType1;
  if (s == "type2") return VehicleType::kType2;
  if (s == "type3") return VehicleType::kType3;
  if (s == "custom") return VehicleType::kCustom;
  throw ParseError("unknown vehicle type '" + std::string(s) + "'");
}

std::string_view to_string(Algorithm a) {
  return a == Algorithm::kExact ? "exact" : "greedy";
}

Algorithm algorithm_from_string(std::string_view s) {
  if (s == "exact") return Algorithm::kExact;
  if (s == "greedy") return Algorithm::kGreedy;
  throw ParseError("unknown algorithm '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  auto add = [&](std::string msg) { out.push_back(std::move(msg)); };

  if (!finite(s.depot)) add("depot: non-finite coordinates");
  if (!nonneg(s.budget)) add("budget_usd: must be >= 0");
  if (!(s.drone.speed_kmh > 0.0) || !std::isfinite(s.drone.speed_kmh))
    add("drone.speed_kmh: must be > 0");
  if (!(s.drone.range_km > 0.0) || !std::isfinite(s.drone.range_km))
    add("drone.range_km: must be > 0");
  if (!nonneg(s.drone.service_time_s)) add("drone.service_time_s: must be >= 0");

  std::set<std::string> vehicle_ids;
  for (const auto& v : s.vehicles) {
    const std::string where = "vehicle '" + v.id + "'";
    if (v.id.empty()) add("vehicle with empty id");
    if (!vehicle_ids.insert(v.id).second) add(where + ": duplicate id");
    if (!finite(v.home)) add(where + ": non-finite home");
    if (!nonneg(v.c_mob)) add(where + ": c_mob must be >= 0");
    if (!nonneg(v.c_stop)) add(where + ": c_stop must be >= 0");
    if (v.cap < 1) add(where + ": cap must be >= 1");
    if (!nonneg(v.t_avail)) add(where + ": t_avail must be >= 0");
    if (!nonneg(v.f_avail)) add(where + ": f_avail must be >= 0");
    if (!nonneg(v.f_mob)) add(where + ": f_mob must be >= 0");
    if (!nonneg(v.f_stop)) add(where + ": f_stop must be >= 0");
    if (!nonneg(v.t_load)) add(where + ": t_load must be >= 0");
    if (v.n_drones < 1) add(where + ": n_drones must be >= 1");
  }

  std::set<std::string> customer_ids;
  for (const auto& c : s.customers) {
    if (c.id.empty()) add("customer with empty id");
    if (!customer_ids.insert(c.id).second) add("customer '" + c.id + "': duplicate id");
    if (!finite(c.position)) add("customer '" + c.id + "': non-finite position");
  }

  if (!s.groups.empty()) {
    std::map<std::string, std::vector<std::string>> owners;
    std::set<std::string> group_ids;
    for (const auto& g : s.groups) {
      const std::string where = "group '" + g.id + "'";
      if (g.id.empty()) add("group with empty id");
      if (!group_ids.insert(g.id).second) add(where + ": duplicate id");
      if (g.members.empty()) add(where + ": no members");
      if (!nonneg(g.t_delivery)) add(where + ": t_delivery must be >= 0");
      if (!finite(g.waiting_location)) add(where + ": non-finite waiting location");
      for (const auto& m : g.members) {
        if (!customer_ids.contains(m)) {
          add(where + ": unknown customer id '" + m + "'");
        } else {
          owners[m].push_back(g.id);
        }
      }
    }
    for (const auto& [cust, gs] : owners) {
      if (gs.size() > 1) {
        std::string msg = "customer '" + cust + "' is in more than one group:";
        for (const auto& g : gs) msg += " '" + g + "'";
        add(msg);
      }
    }
    for (const auto& c : s.customers) {
      if (!owners.contains(c.id)) add("customer '" + c.id + "' is in no group");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

class Reader {
 public:
  Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ParseError(path_ + ": expected an object");
  }

  // Rejects keys that were never consumed.
  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) throw ParseError(path_ + ": unknown field '" + key + "'");
    }
  }

  const Json& required(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) throw ParseError(path_ + ": missing field '" + key + "'");
    return *it;
  }

  const Json* optional(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double number(const std::string& key) { return as_number(required(key), key); }

  double number_or(const std::string& key, double fallback) {
    const Json* j = optional(key);
    return j ? as_number(*j, key) : fallback;
  }

  int integer(const std::string& key) { return as_integer(required(key), key); }

  int integer_or(const std::string& key, int fallback) {
    const Json* j = optional(key);
    return j ? as_integer(*j, key) : fallback;
  }

  std::string string(const std::string& key) {
    const Json& j = required(key);
    if (!j.is_string()) throw ParseError(field(key) + ": expected a string");
    return j.get<std::string>();
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

 private:
  double as_number(const Json& j, const std::string& key) const {
    if (!j.is_number()) throw ParseError(field(key) + ": expected a number");
    return j.get<double>();
  }

  int as_integer(const Json& j, const std::string& key) const {
    if (!j.is_number_integer()) throw ParseError(field(key) + ": expected an integer");
    return j.get<int>();
  }

  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

Point point_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  Point p{r.number("x"), r.number("y")};
  r.finish();
  return p;
}

Json point_to(const Point& p) { return Json{{"x", p.x}, {"y", p.y}}; }

const Json& array_at(Reader& r, const std::string& key) {
  const Json& j = r.required(key);
  if (!j.is_array()) throw ParseError(r.field(key) + ": expected an array");
  return j;
}

Vehicle vehicle_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  Vehicle v;
  v.id = r.string("id");
  v.home = point_from(r.required("home"), path + ".home");
  const Json* type = r.optional("type");
  if (type) {
    if (!type->is_string()) throw ParseError(path + ".type: expected a string");
    v.type = vehicle_type_from_string(type->get<std::string>());
  }
  v.c_mob = r.number("c_mob_usd_per_km");
  v.c_stop = r.number("c_stop_usd_per_s");
  v.cap = r.integer("cap");
  v.t_avail = r.number("t_avail_s");
  v.f_avail = r.number("f_avail_gal");
  v.f_mob = r.number("f_mob_gal_per_km");
  v.f_stop = r.number("f_stop_gal_per_s");
  v.t_load = r.number_or("t_load_s", kDefaultLoadTimeS);
  v.n_drones = r.integer_or("n_drones", kDefaultDronesPerVehicle);
  r.finish();
  return v;
}

Json vehicle_to(const Vehicle& v) {
  return Json{{"id", v.id},
              {"home", point_to(v.home)},
              {"type", std::string(to_string(v.type))},
              {"c_mob_usd_per_km", v.c_mob},
              {"c_stop_usd_per_s", v.c_stop},
              {"cap", v.cap},
              {"t_avail_s", v.t_avail},
              {"f_avail_gal", v.f_avail},
              {"f_mob_gal_per_km", v.f_mob},
              {"f_stop_gal_per_s", v.f_stop},
              {"t_load_s", v.t_load},
              {"n_drones", v.n_drones}};
}

std::vector<std::string> string_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string())
      throw ParseError(path + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

}  // namespace

Scenario scenario_from_json(const Json& doc) {
  Reader r(doc, "$");
  Scenario s;
  if (const Json* id = r.optional("id")) {
    if (!id->is_string()) throw ParseError("$.id: expected a string");
    s.id = id->get<std::string>();
  }
  s.depot = point_from(r.required("depot"), "$.depot");
  s.budget = r.number("budget_usd");
  {
    Reader d(r.required("drone"), "$.drone");
    s.drone.speed_kmh = d.number("speed_kmh");
    s.drone.range_km = d.number("range_km");
    s.drone.service_time_s = d.number("service_time_s");
    d.finish();
  }
  const Json& vehicles = array_at(r, "vehicles");
  for (std::size_t i = 0; i < vehicles.size(); ++i)
    s.vehicles.push_back(vehicle_from(vehicles[i], "$.vehicles[" + std::to_string(i) + "]"));

  const Json& customers = array_at(r, "customers");
  for (std::size_t i = 0; i < customers.size(); ++i) {
    const std::string path = "$.customers[" + std::to_string(i) + "]";
    Reader c(customers[i], path);
    Customer cust;
    cust.id = c.string("id");
    cust.position = Point{c.number("x"), c.number("y")};
    c.finish();
    s.customers.push_back(std::move(cust));
  }

  if (const Json* groups = r.optional("groups")) {
    if (!groups->is_array()) throw ParseError("$.groups: expected an array");
    for (std::size_t i = 0; i < groups->size(); ++i) {
      const std::string path = "$.groups[" + std::to_string(i) + "]";
      Reader g(groups->at(i), path);
      Group grp;
      grp.id = g.string("id");
      grp.members = string_list(g.required("members"), path + ".members");
      grp.waiting_location = point_from(g.required("waiting_location"), path + ".waiting_location");
      grp.t_delivery = g.number("t_delivery_s");
      g.finish();
      s.groups.push_back(std::move(grp));
    }
  }
  r.finish();

  if (auto violations = validate_scenario(s); !violations.empty())
    throw ValidationError(std::move(violations));
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json doc;
  if (!s.id.empty()) doc["id"] = s.id;
  doc["depot"] = point_to(s.depot);
  doc["budget_usd"] = s.budget;
  doc["drone"] = Json{{"speed_kmh", s.drone.speed_kmh},
                      {"range_km", s.drone.range_km},
                      {"service_time_s", s.drone.service_time_s}};
  doc["vehicles"] = Json::array();
  for (const auto& v : s.vehicles) doc["vehicles"].push_back(vehicle_to(v));
  doc["customers"] = Json::array();
  for (const auto& c : s.customers)
    doc["customers"].push_back(Json{{"id", c.id}, {"x", c.position.x}, {"y", c.position.y}});
  if (!s.groups.empty()) {
    doc["groups"] = Json::array();
    for (const auto& g : s.groups) {
      doc["groups"].push_back(Json{{"id", g.id},
                                   {"members", g.members},
                                   {"waiting_location", point_to(g.waiting_location)},
                                   {"t_delivery_s", g.t_delivery}});
    }
  }
  return doc;
}

namespace {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path));
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_json(s).dump(2) + "\n");
}

Scenario with_fleet(const Scenario& s, std::size_t n) {
  Scenario out = s;
  if (n < out.vehicles.size()) out.vehicles.resize(n);
  return out;
}

CustomerIndex index_customers(const std::vector<Customer>& customers) {
  CustomerIndex idx;
  idx.reserve(customers.size());
  for (const auto& c : customers) idx.emplace(c.id, c.position);
  return idx;
}

// ---------------------------------------------------------------------------
// Solution JSON

const VehicleRoute* Solution::route_for(std::string_view vehicle_id) const {
  for (const auto& r : routes)
    if (r.vehicle_id == vehicle_id) return &r;
  return nullptr;
}

Json solution_to_json(const Solution& sol) {
  Json doc;
  doc["algorithm"] = std::string(to_string(sol.algorithm));
  Json routes = Json::object();
  Json per_vehicle = Json::object();
  for (const auto& r : sol.routes) {
    routes[r.vehicle_id] = r.trips;
    per_vehicle[r.vehicle_id] = Json{{"d_tot_km", r.stats.d_tot},
                                     {"t_wait_s", r.stats.t_wait},
                                     {"t_tot_s", r.stats.t_tot},
                                     {"fuel_used_gal", r.stats.fuel_used},
                                     {"cost_usd", r.stats.cost}};
  }
  doc["routes"] = std::move(routes);
  doc["per_vehicle"] = std::move(per_vehicle);
  doc["total_cost_usd"] = sol.total_cost;
  doc["uncovered"] = sol.uncovered;
  doc["proven_optimal"] = sol.proven_optimal;
  doc["time_limit_reached"] = sol.time_limit_reached;
  doc["sequencing_exact"] = sol.sequencing_exact;
  doc["provenance"] = Json{{"seed", sol.provenance.seed},
                           {"algorithm", std::string(to_string(sol.algorithm))},
                           {"config_hash", sol.provenance.config_hash}};
  return doc;
}

Solution solution_from_json(const Json& doc) {
  Reader r(doc, "$");
  Solution sol;
  sol.algorithm = algorithm_from_string(r.string("algorithm"));
  const Json& routes = r.required("routes");
  const Json& per_vehicle = r.required("per_vehicle");
  if (!routes.is_object() || !per_vehicle.is_object())
    throw ParseError("$.routes and $.per_vehicle must be objects");
  for (const auto& [vid, trips] : routes.items()) {
    VehicleRoute route;
    route.vehicle_id = vid;
    if (!trips.is_array()) throw ParseError("$.routes." + vid + ": expected an array");
    for (std::size_t i = 0; i < trips.size(); ++i)
      route.trips.push_back(string_list(trips[i], "$.routes." + vid + "[" + std::to_string(i) + "]"));
    auto stats = per_vehicle.find(vid);
    if (stats == per_vehicle.end()) throw ParseError("$.per_vehicle: missing '" + vid + "'");
    Reader sr(*stats, "$.per_vehicle." + vid);
    route.stats.d_tot = sr.number("d_tot_km");
    route.stats.t_wait = sr.number("t_wait_s");
    route.stats.t_tot = sr.number("t_tot_s");
    route.stats.fuel_used = sr.number("fuel_used_gal");
    route.stats.cost = sr.number("cost_usd");
    sr.finish();
    sol.routes.push_back(std::move(route));
  }
  sol.total_cost = r.number("total_cost_usd");
  sol.uncovered = string_list(r.required("uncovered"), "$.uncovered");
  auto flag = [&](const std::string& key) {
    const Json& j = r.required(key);
    if (!j.is_boolean()) throw ParseError("$." + key + ": expected a boolean");
    return j.get<bool>();
  };
  sol.proven_optimal = flag("proven_optimal");
  sol.time_limit_reached = flag("time_limit_reached");
  sol.sequencing_exact = flag("sequencing_exact");
  Reader p(r.required("provenance"), "$.provenance");
  const Json& seed = p.required("seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer())
    throw ParseError("$.provenance.seed: expected an integer");
  sol.provenance.seed = seed.get<std::uint64_t>();
  p.string("algorithm");
  sol.provenance.config_hash = p.string("config_hash");
  p.finish();
  r.finish();
  return sol;
}

Solution load_solution(const std::filesystem::path& path) {
  return solution_from_json(read_json_file(path));
}

void save_solution(const Solution& sol, const std::filesystem::path& path) {
  write_text_file(path, solution_to_json(sol).dump(2) + "\n");
}

std::string config_hash(std::string_view canonical_text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace lad
