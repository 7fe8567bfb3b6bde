#include "lad/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include "lad/error.hpp"
#include "lad/segments.hpp"

namespace lad {

namespace {

constexpr TypeDefaults kType1{0.10, 0.00013, 13.0, 7, 0.025, 0.00006};
constexpr TypeDefaults kType2{0.12, 0.00033, 15.0, 9, 0.030, 0.00008};
constexpr TypeDefaults kType3{0.15, 0.00071, 23.0, 14, 0.045, 0.00012};

std::string padded(const char* prefix, std::size_t i, std::size_t n) {
  const std::size_t width = std::max<std::size_t>(3, std::to_string(n).size());
  std::string num = std::to_string(i);
  return prefix + std::string(width - std::min(width, num.size()), '0') + num;
}

}  // namespace

const TypeDefaults& type_defaults(VehicleType t) {
  switch (t) {
    case VehicleType::kType1:
      return kType1;
    case VehicleType::kType2:
      return kType2;
    case VehicleType::kType3:
      return kType3;
    case VehicleType::kCustom:
      break;
  }
  throw ValidationError({"no defaults for custom vehicle type"});
}

std::vector<std::string> validate_gen_config(const GenConfig& c) {
  std::vector<std::string> v;
  if (c.n_customers <= 0) v.emplace_back("n_customers must be positive");
  if (c.n_vehicles <= 0) v.emplace_back("n_vehicles must be positive");
  if (!(c.box_km > 0.0) || !std::isfinite(c.box_km)) v.emplace_back("box_km must be positive");
  double mix = 0.0;
  for (double w : c.type_mix) {
    if (!(w >= 0.0) || !std::isfinite(w)) v.emplace_back("type_mix weights must be >= 0");
    mix += w;
  }
  if (!(mix > 0.0)) v.emplace_back("type_mix needs a positive weight");
  if (!(c.t_avail_s >= 0.0)) v.emplace_back("t_avail_s must be >= 0");
  if (!(c.t_load_s >= 0.0)) v.emplace_back("t_load_s must be >= 0");
  if (c.n_drones < 1) v.emplace_back("n_drones must be >= 1");
  if (c.budget_usd && !(*c.budget_usd >= 0.0)) v.emplace_back("budget_usd must be >= 0");
  return v;
}

Scenario generate_scenario(const GenConfig& c) {
  if (auto v = validate_gen_config(c); !v.empty()) throw ValidationError(std::move(v));
  std::mt19937_64 rng(c.seed);
  // Hand-rolled draws: the standard distributions are not required to give
  // the same sequence on every library implementation.
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto coord = [&] { return unit() * c.box_km; };

  Scenario s;
  s.id = "gen-s" + std::to_string(c.seed) + "-c" + std::to_string(c.n_customers) + "-v" +
         std::to_string(c.n_vehicles);
  s.depot = {c.box_km / 2.0, c.box_km / 2.0};
  s.budget = c.budget_usd ? *c.budget_usd : kBudgetPerCustomerUsd * c.n_customers;

  const auto nc = static_cast<std::size_t>(c.n_customers);
  for (std::size_t i = 0; i < nc; ++i) {
    const double x = coord();
    const double y = coord();
    s.customers.push_back({padded("c", i, nc), {x, y}});
  }

  const double mix = c.type_mix[0] + c.type_mix[1] + c.type_mix[2];
  const auto nv = static_cast<std::size_t>(c.n_vehicles);
  for (std::size_t i = 0; i < nv; ++i) {
    Vehicle v;
    v.id = padded("v", i, nv);
    const double x = coord();
    const double y = coord();
    v.home = {x, y};
    const double r = unit() * mix;
    v.type = r < c.type_mix[0]                  ? VehicleType::kType1
             : r < c.type_mix[0] + c.type_mix[1] ? VehicleType::kType2
                                                  : VehicleType::kType3;
    if (c.type_mix[2] == 0.0 && v.type == VehicleType::kType3)
      v.type = c.type_mix[1] > 0.0 ? VehicleType::kType2 : VehicleType::kType1;
    const TypeDefaults& d = type_defaults(v.type);
    v.c_mob = d.c_mob;
    v.c_stop = d.c_stop;
    v.cap = d.cap;
    v.f_avail = d.f_avail;
    v.f_mob = d.f_mob;
    v.f_stop = d.f_stop;
    v.t_avail = c.t_avail_s;
    v.t_load = c.t_load_s;
    v.n_drones = c.n_drones;
    s.vehicles.push_back(std::move(v));
  }
  return s;
}

void ensure_groups(Scenario& s, GroupingConfig config) {
  if (!s.groups.empty()) return;
  config.drone_range_km = s.drone.range_km;
  s.groups = build_groups(s.customers, config);
  int drones = kDefaultDronesPerVehicle;
  if (!s.vehicles.empty()) {
    drones = s.vehicles.front().n_drones;
    for (const auto& v : s.vehicles) drones = std::min(drones, v.n_drones);
  }
  assign_delivery_times(s, drones);
}

namespace {

struct Job {
  std::size_t scenario;
  std::size_t fleet;
  Algorithm algorithm;
};

ReportRow run_one(const Scenario& base, const Job& job, const BenchConfig& config) {
  ReportRow row;
  row.scenario_id = base.id;
  row.algorithm = std::string(to_string(job.algorithm));
  row.fleet_size = job.fleet;
  try {
    if (job.fleet > base.vehicles.size())
      throw ValidationError({"fleet size " + std::to_string(job.fleet) + " exceeds pool of " +
                             std::to_string(base.vehicles.size())});
    const Scenario s = with_fleet(base, job.fleet);
    auto provider = make_provider(config.travel);
    const SegmentCache cache = precompute_segments(s, *provider);
    const auto start = std::chrono::steady_clock::now();
    Solution sol = job.algorithm == Algorithm::kExact ? solve_exact(s, cache, config.exact)
                                                      : solve_greedy(s, cache, config.greedy);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    row = make_report_row(base.id, job.fleet, sol, s.budget, config.profit_share);
    if (config.record_runtime) row.runtime_s = took.count();
  } catch (const InfeasibleError& e) {
    row.status = std::string("infeasible: ") + e.what();
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

}  // namespace

std::vector<ReportRow> run_bench(const BenchConfig& config) {
  std::vector<Scenario> scenarios;
  std::vector<std::string> load_errors;
  for (const auto& path : config.scenarios) {
    try {
      Scenario s = load_scenario(path);
      if (s.id.empty()) s.id = path.stem().string();
      ensure_groups(s, config.grouping);
      scenarios.push_back(std::move(s));
      load_errors.emplace_back();
    } catch (const std::exception& e) {
      Scenario stub;
      stub.id = path.stem().string();
      scenarios.push_back(std::move(stub));
      load_errors.emplace_back(e.what());
    }
  }

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::vector<std::size_t> fleets = config.fleet_sizes;
    if (fleets.empty()) fleets.push_back(scenarios[i].vehicles.size());
    for (std::size_t f : fleets)
      for (Algorithm a : config.algorithms) jobs.push_back({i, f, a});
  }

  std::vector<ReportRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      if (!load_errors[job.scenario].empty()) {
        rows[j].scenario_id = scenarios[job.scenario].id;
        rows[j].algorithm = std::string(to_string(job.algorithm));
        rows[j].fleet_size = job.fleet;
        rows[j].status = "error: " + load_errors[job.scenario];
        continue;
      }
      rows[j] = run_one(scenarios[job.scenario], job, config);
    }
  };
  const int n = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  write_report_header(out);
  for (const auto& r : rows) write_report_row(out, r);
}

void write_report(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report '" + path.string() + "'");
  write_report(out, rows);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace lad
