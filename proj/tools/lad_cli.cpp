// lad: scenario generation, grouping, solving and fleet-size sweeps.
//
// Exit codes: 0 success, 1 argument or validation error, 2 solver
// infeasible (or groups left uncovered), 3 I/O or travel provider failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lad/error.hpp"
#include "lad/exact.hpp"
#include "lad/experiments.hpp"
#include "lad/geo.hpp"
#include "lad/greedy.hpp"
#include "lad/grouping.hpp"
#include "lad/lp_export.hpp"
#include "lad/metrics.hpp"
#include "lad/model.hpp"
#include "lad/segments.hpp"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kIo = 3 };

// Settings shared by every subcommand. Values come from the --config file
// first, then from flags.
struct Settings {
  std::uint64_t seed = 0;
  lad::TravelModel travel;
  lad::ExactConfig exact;
  lad::GreedyConfig greedy;
  lad::GroupingConfig grouping;
  double profit_share = 0.5;
  int workers = 1;
};

// The config file uses the scenario document conventions: one JSON object,
// snake_case keys with unit suffixes, unknown keys rejected.
void apply_config_file(const std::filesystem::path& path, Settings& st) {
  std::ifstream in(path);
  if (!in) throw lad::IoError("cannot open config '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw lad::ParseError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw lad::ParseError(path.string() + ": expected an object");
  auto section = [&](const char* key) -> const Json* {
    auto it = doc.find(key);
    if (it == doc.end()) return nullptr;
    if (!it->is_object()) throw lad::ParseError(std::string("$.") + key + ": expected an object");
    return &*it;
  };
  auto check_keys = [](const Json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
    for (const auto& [k, _] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) throw lad::ParseError(where + "." + k + ": unknown field");
    }
  };
  auto number = [](const Json& v, const std::string& where) {
    if (!v.is_number()) throw lad::ParseError(where + ": expected a number");
    return v.get<double>();
  };
  auto integer = [](const Json& v, const std::string& where) {
    if (!v.is_number_integer()) throw lad::ParseError(where + ": expected an integer");
    return v.get<long long>();
  };

  check_keys(doc, "$", {"seed", "travel", "exact", "greedy", "grouping", "profit_share", "workers"});
  if (doc.contains("seed")) st.seed = static_cast<std::uint64_t>(integer(doc["seed"], "$.seed"));
  if (doc.contains("profit_share")) st.profit_share = number(doc["profit_share"], "$.profit_share");
  if (doc.contains("workers")) st.workers = static_cast<int>(integer(doc["workers"], "$.workers"));
  if (const Json* t = section("travel")) {
    check_keys(*t, "$.travel",
               {"provider", "circuity", "vehicle_speed_kmh", "matrix_source", "endpoint",
                "http_max_retries", "http_timeout_s"});
    if (t->contains("provider"))
      st.travel.provider = lad::provider_kind_from_string(t->at("provider").get<std::string>());
    if (t->contains("circuity")) st.travel.circuity = number(t->at("circuity"), "$.travel.circuity");
    if (t->contains("vehicle_speed_kmh"))
      st.travel.vehicle_speed_kmh = number(t->at("vehicle_speed_kmh"), "$.travel.vehicle_speed_kmh");
    if (t->contains("matrix_source"))
      st.travel.matrix_source = t->at("matrix_source").get<std::string>();
    if (t->contains("endpoint")) st.travel.endpoint = t->at("endpoint").get<std::string>();
    if (t->contains("http_max_retries"))
      st.travel.http_max_retries =
          static_cast<int>(integer(t->at("http_max_retries"), "$.travel.http_max_retries"));
    if (t->contains("http_timeout_s"))
      st.travel.http_timeout_s = number(t->at("http_timeout_s"), "$.travel.http_timeout_s");
  }
  if (const Json* e = section("exact")) {
    check_keys(*e, "$.exact", {"time_limit_s", "allow_reload", "pruning", "warm_start"});
    if (e->contains("time_limit_s"))
      st.exact.time_limit_s = number(e->at("time_limit_s"), "$.exact.time_limit_s");
    if (e->contains("allow_reload")) st.exact.allow_reload = e->at("allow_reload").get<bool>();
    if (e->contains("pruning")) st.exact.pruning = e->at("pruning").get<bool>();
    if (e->contains("warm_start")) st.exact.warm_start = e->at("warm_start").get<bool>();
  }
  if (const Json* g = section("greedy")) {
    check_keys(*g, "$.greedy", {"branch_limit"});
    if (g->contains("branch_limit")) {
      if (g->at("branch_limit").is_null())
        st.greedy.branch_limit.reset();
      else
        st.greedy.branch_limit =
            static_cast<int>(integer(g->at("branch_limit"), "$.greedy.branch_limit"));
    }
  }
  if (const Json* g = section("grouping")) {
    check_keys(*g, "$.grouping", {"max_group_size", "target_groups", "max_rounds"});
    if (g->contains("max_group_size"))
      st.grouping.max_group_size =
          static_cast<int>(integer(g->at("max_group_size"), "$.grouping.max_group_size"));
    if (g->contains("target_groups"))
      st.grouping.target_groups =
          static_cast<int>(integer(g->at("target_groups"), "$.grouping.target_groups"));
    if (g->contains("max_rounds"))
      st.grouping.max_rounds = static_cast<int>(integer(g->at("max_rounds"), "$.grouping.max_rounds"));
  }
}

std::string canonical_settings(const Settings& st, lad::Algorithm algo) {
  Json j;
  j["algorithm"] = std::string(lad::to_string(algo));
  j["seed"] = st.seed;
  j["travel"] = {{"provider", std::string(lad::to_string(st.travel.provider))},
                 {"circuity", st.travel.circuity},
                 {"vehicle_speed_kmh", st.travel.vehicle_speed_kmh}};
  if (algo == lad::Algorithm::kExact) {
    j["exact"] = {{"time_limit_s", st.exact.time_limit_s},
                  {"allow_reload", st.exact.allow_reload},
                  {"pruning", st.exact.pruning},
                  {"warm_start", st.exact.warm_start}};
  } else {
    j["greedy"] = {{"branch_limit", st.greedy.branch_limit ? Json(*st.greedy.branch_limit) : Json()}};
  }
  return j.dump();
}

std::vector<std::size_t> parse_fleet_sizes(const std::string& spec) {
  // "10:100:10" (inclusive range with step) or "10,20,50".
  std::vector<std::size_t> out;
  auto to_size = [&](const std::string& t) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != t.size() || v <= 0)
      throw lad::ValidationError({"bad fleet size '" + t + "' in '" + spec + "'"});
    return static_cast<std::size_t>(v);
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw lad::ValidationError({"fleet range must be start:stop:step"});
    const std::size_t a = to_size(parts[0]), b = to_size(parts[1]), step = to_size(parts[2]);
    for (std::size_t n = a; n <= b; n += step) out.push_back(n);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_size(p));
  }
  return out;
}

lad::Scenario load_grouped(const std::filesystem::path& path, const Settings& st) {
  lad::Scenario s = lad::load_scenario(path);
  lad::GroupingConfig g = st.grouping;
  g.seed = st.seed;
  lad::ensure_groups(s, g);
  return s;
}

int report_uncovered(const lad::Solution& sol) {
  if (sol.full_coverage()) return kOk;
  std::cerr << "lad: " << sol.uncovered.size() << " group(s) left uncovered\n";
  return kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Last-mile delivery with autonomous vehicles and drones"};
  app.require_subcommand(1);
  Settings st;

  std::string config_path;
  std::string travel = "euclidean";
  std::string matrix_path, endpoint;
  std::optional<std::uint64_t> seed;
  std::optional<double> circuity, speed;
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--travel", travel, "Travel provider")
      ->check(CLI::IsMember({"euclidean", "matrix", "http"}));
  app.add_option("--config", config_path, "Settings file (JSON)");
  app.add_option("--matrix", matrix_path, "Matrix CSV for --travel matrix");
  app.add_option("--endpoint", endpoint, "Table service URL for --travel http");
  app.add_option("--circuity", circuity, "Road/straight-line ratio (euclidean)");
  app.add_option("--speed", speed, "Vehicle speed in km/h");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random scenario");
  lad::GenConfig gc;
  std::string gen_out, mix = "1,1,1";
  bool gen_groups = false;
  gen->add_option("--customers", gc.n_customers, "Customer count")->capture_default_str();
  gen->add_option("--vehicles", gc.n_vehicles, "Vehicle pool size")->capture_default_str();
  gen->add_option("--box", gc.box_km, "Side of the square area in km")->capture_default_str();
  gen->add_option("--mix", mix, "Weights of type1,type2,type3")->capture_default_str();
  gen->add_option("--t-avail", gc.t_avail_s, "Vehicle availability in s")->capture_default_str();
  gen->add_option("--budget", gc.budget_usd, "Budget in USD (default 5.99 per customer)");
  gen->add_flag("--groups", gen_groups, "Also build groups and delivery times");
  gen->add_option("-o,--out", gen_out, "Output scenario")->required();

  // group
  auto* grp = app.add_subcommand("group", "Build customer groups");
  std::string grp_in, grp_out;
  std::optional<int> drones;
  grp->add_option("scenario", grp_in, "Input scenario")->required();
  grp->add_option("-o,--out", grp_out, "Output scenario with groups")->required();
  grp->add_option("--max-size", st.grouping.max_group_size, "Largest group")->capture_default_str();
  grp->add_option("--groups", st.grouping.target_groups, "Number of groups");
  grp->add_option("--drones", drones, "Drones per vehicle (default: fleet minimum)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a scenario");
  std::string solve_in, solve_out, algo = "greedy", segments_out, tree_out;
  std::optional<double> time_limit;
  std::optional<int> branch_limit;
  bool reload = false, no_pruning = false, no_warm = false;
  solve->add_option("scenario", solve_in, "Input scenario")->required();
  solve->add_option("--algo", algo, "exact or greedy")->check(CLI::IsMember({"exact", "greedy"}));
  solve->add_option("-o,--out", solve_out, "Solution JSON (default stdout)");
  solve->add_option("--time-limit", time_limit, "Exact solver limit in s");
  solve->add_flag("--reload", reload, "Exact: allow several trips per vehicle");
  solve->add_flag("--no-pruning", no_pruning, "Exact: disable bound pruning");
  solve->add_flag("--no-warm-start", no_warm, "Exact: do not seed with greedy");
  solve->add_option("--branch-limit", branch_limit, "Greedy: children per tree node (0 = all)");
  solve->add_option("--dump-segments", segments_out, "Write the segment cache as matrix CSV");
  solve->add_option("--dump-tree", tree_out, "Greedy: write the first round's trees");

  // export-lp
  auto* lp = app.add_subcommand("export-lp", "Write the assignment model in LP format");
  std::string lp_in, lp_out;
  lp->add_option("scenario", lp_in, "Input scenario")->required();
  lp->add_option("-o,--out", lp_out, "LP file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Fleet-size sweep over scenarios");
  std::vector<std::string> bench_in;
  std::string fleets, bench_out;
  std::vector<std::string> algos = {"greedy"};
  bool no_runtime = false;
  bench->add_option("scenarios", bench_in, "Scenario files")->required();
  bench->add_option("--fleet", fleets, "start:stop:step or comma list (default whole pool)");
  bench->add_option("--algo", algos, "Algorithms")
      ->check(CLI::IsMember({"exact", "greedy"}))
      ->delimiter(',');
  bench->add_option("-o,--out", bench_out, "CSV report (default stdout)");
  bench->add_option("--time-limit", time_limit, "Exact solver limit in s");
  bench->add_flag("--reload", reload, "Exact: allow several trips per vehicle");
  bench->add_option("--branch-limit", branch_limit, "Greedy: children per tree node (0 = all)");
  bench->add_option("--workers", st.workers, "Worker threads")->capture_default_str();
  bench->add_option("--share", st.profit_share, "Vehicle share of savings")->capture_default_str();
  bench->add_flag("--no-runtime", no_runtime, "Leave runtime_s empty");

  // report
  auto* rep = app.add_subcommand("report", "Metrics CSV for solved scenarios");
  std::string rep_scenario, rep_out;
  std::vector<std::string> rep_solutions;
  rep->add_option("scenario", rep_scenario, "Scenario the solutions belong to")->required();
  rep->add_option("solutions", rep_solutions, "Solution files")->required();
  rep->add_option("-o,--out", rep_out, "CSV report (default stdout)");
  rep->add_option("--share", st.profit_share, "Vehicle share of savings")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path.empty()) apply_config_file(config_path, st);
    if (seed) st.seed = *seed;
    if (app.count("--travel")) st.travel.provider = lad::provider_kind_from_string(travel);
    if (!matrix_path.empty()) st.travel.matrix_source = matrix_path;
    if (!endpoint.empty()) st.travel.endpoint = endpoint;
    if (circuity) st.travel.circuity = *circuity;
    if (speed) st.travel.vehicle_speed_kmh = *speed;
    if (time_limit) st.exact.time_limit_s = *time_limit;
    if (reload) st.exact.allow_reload = true;
    if (no_pruning) st.exact.pruning = false;
    if (no_warm) st.exact.warm_start = false;
    if (branch_limit) {
      if (*branch_limit < 0) throw lad::ValidationError({"--branch-limit must be >= 0"});
      st.greedy.branch_limit = *branch_limit == 0 ? std::nullopt : std::optional<int>(*branch_limit);
    }
    st.grouping.seed = st.seed;
    if (auto v = lad::validate_travel_model(st.travel); !v.empty())
      throw lad::ValidationError(std::move(v));

    if (*gen) {
      std::vector<double> w;
      std::stringstream ss(mix);
      for (std::string p; std::getline(ss, p, ',');) w.push_back(std::stod(p));
      if (w.size() != 3) throw lad::ValidationError({"--mix needs three weights"});
      gc.type_mix = {w[0], w[1], w[2]};
      gc.seed = st.seed;
      lad::Scenario s = lad::generate_scenario(gc);
      if (gen_groups) lad::ensure_groups(s, st.grouping);
      lad::save_scenario(s, gen_out);
      return kOk;
    }

    if (*grp) {
      lad::Scenario s = lad::load_scenario(grp_in);
      st.grouping.drone_range_km = s.drone.range_km;
      s.groups = lad::build_groups(s.customers, st.grouping);
      int n = lad::kDefaultDronesPerVehicle;
      if (drones) {
        n = *drones;
      } else if (!s.vehicles.empty()) {
        n = s.vehicles.front().n_drones;
        for (const auto& v : s.vehicles) n = std::min(n, v.n_drones);
      }
      if (n < 1) throw lad::ValidationError({"--drones must be >= 1"});
      lad::assign_delivery_times(s, n);
      lad::save_scenario(s, grp_out);
      std::cerr << "lad: " << s.groups.size() << " groups\n";
      return kOk;
    }

    if (*solve) {
      const lad::Scenario s = load_grouped(solve_in, st);
      auto provider = lad::make_provider(st.travel);
      const lad::SegmentCache cache = lad::precompute_segments(s, *provider);
      if (!segments_out.empty()) lad::dump_segments(cache, segments_out);
      const lad::Algorithm a = lad::algorithm_from_string(algo);
      if (!tree_out.empty() && a == lad::Algorithm::kGreedy) {
        std::ofstream out(tree_out);
        if (!out) throw lad::IoError("cannot write '" + tree_out + "'");
        std::vector<std::size_t> all(cache.n_groups());
        for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;
        for (std::size_t v = 0; v < s.vehicles.size(); ++v) {
          out << "# vehicle " << s.vehicles[v].id << "\n";
          lad::dump_tree(lad::build_tree(s.vehicles[v], v, {}, all, cache, s, st.greedy), cache, out);
        }
      }
      lad::Solution sol = a == lad::Algorithm::kExact ? lad::solve_exact(s, cache, st.exact)
                                                      : lad::solve_greedy(s, cache, st.greedy);
      sol.provenance.seed = st.seed;
      sol.provenance.config_hash = lad::config_hash(canonical_settings(st, a));
      if (solve_out.empty()) {
        std::cout << lad::solution_to_json(sol).dump(2) << "\n";
      } else {
        lad::save_solution(sol, solve_out);
      }
      if (sol.time_limit_reached) std::cerr << "lad: time limit reached\n";
      return report_uncovered(sol);
    }

    if (*lp) {
      const lad::Scenario s = load_grouped(lp_in, st);
      auto provider = lad::make_provider(st.travel);
      const lad::SegmentCache cache = lad::precompute_segments(s, *provider);
      if (lp_out.empty()) {
        lad::export_lp(s, cache, std::cout);
      } else {
        lad::export_lp(s, cache, std::filesystem::path(lp_out));
      }
      return kOk;
    }

    if (*bench) {
      lad::BenchConfig bc;
      for (const auto& p : bench_in) bc.scenarios.emplace_back(p);
      if (!fleets.empty()) bc.fleet_sizes = parse_fleet_sizes(fleets);
      bc.algorithms.clear();
      for (const auto& a : algos) bc.algorithms.push_back(lad::algorithm_from_string(a));
      bc.travel = st.travel;
      bc.exact = st.exact;
      bc.greedy = st.greedy;
      bc.grouping = st.grouping;
      bc.profit_share = st.profit_share;
      bc.workers = st.workers;
      bc.record_runtime = !no_runtime;
      const auto rows = lad::run_bench(bc);
      if (bench_out.empty()) {
        lad::write_report(std::cout, rows);
      } else {
        lad::write_report(std::filesystem::path(bench_out), rows);
      }
      return kOk;
    }

    if (*rep) {
      const lad::Scenario s = lad::load_scenario(rep_scenario);
      std::vector<lad::ReportRow> rows;
      for (const auto& path : rep_solutions) {
        const lad::Solution sol = lad::load_solution(path);
        rows.push_back(lad::make_report_row(s.id.empty() ? std::filesystem::path(rep_scenario).stem().string() : s.id,
                                            s.vehicles.size(), sol, s.budget, st.profit_share));
      }
      if (rep_out.empty()) {
        lad::write_report(std::cout, rows);
      } else {
        lad::write_report(std::filesystem::path(rep_out), rows);
      }
      return kOk;
    }
  } catch (const lad::ValidationError& e) {
    std::cerr << "lad: invalid input\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return kUsage;
  } catch (const lad::ParseError& e) {
    std::cerr << "lad: " << e.what() << "\n";
    return kUsage;
  } catch (const lad::InfeasibleError& e) {
    std::cerr << "lad: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const lad::IoError& e) {
    std::cerr << "lad: " << e.what() << "\n";
    return kIo;
  } catch (const lad::ProviderError& e) {
    std::cerr << "lad: travel provider: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lad: bad number: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "lad: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
