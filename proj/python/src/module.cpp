#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

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

namespace py = pybind11;

namespace {

lad::TravelModel travel_model(double circuity, double speed_kmh,
                              std::optional<std::filesystem::path> matrix) {
  lad::TravelModel m;
  m.circuity = circuity;
  m.vehicle_speed_kmh = speed_kmh;
  if (matrix) {
    m.provider = lad::ProviderKind::kMatrix;
    m.matrix_source = std::move(matrix);
  }
  return m;
}

lad::SegmentCache segments_for(const lad::Scenario& s, const lad::TravelModel& m) {
  auto provider = lad::make_provider(m);
  return lad::precompute_segments(s, *provider);
}

py::dict route_dict(const lad::VehicleRoute& r) {
  py::dict d;
  d["vehicle_id"] = r.vehicle_id;
  d["trips"] = r.trips;
  d["d_tot_km"] = r.stats.d_tot;
  d["t_wait_s"] = r.stats.t_wait;
  d["t_tot_s"] = r.stats.t_tot;
  d["fuel_used_gal"] = r.stats.fuel_used;
  d["cost_usd"] = r.stats.cost;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lad, m) {
  m.doc() = "Last-mile delivery with autonomous vehicles and drones";

  auto error = py::register_exception<lad::Error>(m, "LadError");
  py::register_exception<lad::ParseError>(m, "ParseError", error);
  py::register_exception<lad::ValidationError>(m, "ValidationError", error);
  py::register_exception<lad::ProviderError>(m, "ProviderError", error);
  py::register_exception<lad::IoError>(m, "IoError", error);
  py::register_exception<lad::InfeasibleError>(m, "InfeasibleError", error);
  py::register_exception<lad::PartialCoverageError>(m, "PartialCoverageError", error);

  py::class_<lad::Point>(m, "Point")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &lad::Point::x)
      .def_readwrite("y", &lad::Point::y)
      .def("__repr__", [](const lad::Point& p) {
        return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
      });

  py::class_<lad::Vehicle>(m, "Vehicle")
      .def_readonly("id", &lad::Vehicle::id)
      .def_readonly("home", &lad::Vehicle::home)
      .def_readonly("c_mob", &lad::Vehicle::c_mob)
      .def_readonly("c_stop", &lad::Vehicle::c_stop)
      .def_readonly("cap", &lad::Vehicle::cap)
      .def_readonly("t_avail", &lad::Vehicle::t_avail)
      .def_readonly("f_avail", &lad::Vehicle::f_avail)
      .def_property_readonly("type",
                             [](const lad::Vehicle& v) { return std::string(lad::to_string(v.type)); });

  py::class_<lad::Group>(m, "Group")
      .def_readonly("id", &lad::Group::id)
      .def_readonly("members", &lad::Group::members)
      .def_readonly("waiting_location", &lad::Group::waiting_location)
      .def_readonly("t_delivery", &lad::Group::t_delivery);

  py::class_<lad::Scenario>(m, "Scenario")
      .def_static("load", &lad::load_scenario, py::arg("path"))
      .def_static(
          "from_json",
          [](const std::string& text) {
            nlohmann::ordered_json doc;
            try {
              doc = nlohmann::ordered_json::parse(text);
            } catch (const nlohmann::json::parse_error& e) {
              throw lad::ParseError(e.what());
            }
            return lad::scenario_from_json(doc);
          },
          py::arg("text"))
      .def("to_json", [](const lad::Scenario& s) { return lad::scenario_to_json(s).dump(2); })
      .def("save", [](const lad::Scenario& s, const std::filesystem::path& p) { lad::save_scenario(s, p); })
      .def("with_fleet", &lad::with_fleet, py::arg("n"))
      .def("validate", &lad::validate_scenario)
      .def_readonly("id", &lad::Scenario::id)
      .def_readwrite("budget", &lad::Scenario::budget)
      .def_readonly("depot", &lad::Scenario::depot)
      .def_readonly("vehicles", &lad::Scenario::vehicles)
      .def_readonly("groups", &lad::Scenario::groups)
      .def_property_readonly("n_customers", [](const lad::Scenario& s) { return s.customers.size(); });

  py::class_<lad::Solution>(m, "Solution")
      .def_readonly("total_cost", &lad::Solution::total_cost)
      .def_readonly("uncovered", &lad::Solution::uncovered)
      .def_readonly("proven_optimal", &lad::Solution::proven_optimal)
      .def_readonly("time_limit_reached", &lad::Solution::time_limit_reached)
      .def_property_readonly("algorithm",
                             [](const lad::Solution& s) { return std::string(lad::to_string(s.algorithm)); })
      .def_property_readonly("full_coverage", &lad::Solution::full_coverage)
      .def_property_readonly("n_participating", &lad::Solution::n_participating)
      .def_property_readonly("routes",
                             [](const lad::Solution& s) {
                               py::list out;
                               for (const auto& r : s.routes) out.append(route_dict(r));
                               return out;
                             })
      .def("to_json", [](const lad::Solution& s) { return lad::solution_to_json(s).dump(2); });

  m.def(
      "generate",
      [](int n_customers, int n_vehicles, std::uint64_t seed, double box_km,
         std::array<double, 3> type_mix, std::optional<double> budget) {
        lad::GenConfig c;
        c.n_customers = n_customers;
        c.n_vehicles = n_vehicles;
        c.seed = seed;
        c.box_km = box_km;
        c.type_mix = type_mix;
        c.budget_usd = budget;
        return lad::generate_scenario(c);
      },
      py::arg("n_customers") = 500, py::arg("n_vehicles") = 50, py::arg("seed") = 0,
      py::arg("box_km") = 20.0, py::arg("type_mix") = std::array<double, 3>{1, 1, 1},
      py::arg("budget") = py::none(),
      "Random scenario: customers and homes uniform in the box, depot at its centre.");

  m.def(
      "build_groups",
      [](lad::Scenario s, std::optional<int> target_groups, int max_group_size, std::uint64_t seed) {
        lad::GroupingConfig c;
        c.target_groups = target_groups;
        c.max_group_size = max_group_size;
        c.seed = seed;
        s.groups.clear();
        lad::ensure_groups(s, c);
        return s;
      },
      py::arg("scenario"), py::arg("target_groups") = py::none(), py::arg("max_group_size") = 10,
      py::arg("seed") = 0, "Copy of the scenario with freshly built groups and delivery times.");

  m.def(
      "solve",
      [](const lad::Scenario& s, const std::string& algo, double time_limit_s, bool allow_reload,
         std::optional<int> branch_limit, double circuity, double speed_kmh,
         std::optional<std::filesystem::path> matrix) {
        const auto cache = segments_for(s, travel_model(circuity, speed_kmh, std::move(matrix)));
        py::gil_scoped_release release;
        if (lad::algorithm_from_string(algo) == lad::Algorithm::kExact) {
          lad::ExactConfig c;
          c.time_limit_s = time_limit_s;
          c.allow_reload = allow_reload;
          return lad::solve_exact(s, cache, c);
        }
        lad::GreedyConfig c;
        c.branch_limit = branch_limit;
        return lad::solve_greedy(s, cache, c);
      },
      py::arg("scenario"), py::arg("algo") = "greedy", py::arg("time_limit_s") = 300.0,
      py::arg("allow_reload") = false, py::arg("branch_limit") = 4,
      py::arg("circuity") = lad::kDefaultCircuity, py::arg("speed_kmh") = lad::kDefaultVehicleSpeedKmh,
      py::arg("matrix") = py::none());

  m.def(
      "export_lp",
      [](const lad::Scenario& s, double circuity, double speed_kmh) {
        std::ostringstream out;
        lad::export_lp(s, segments_for(s, travel_model(circuity, speed_kmh, std::nullopt)), out);
        return out.str();
      },
      py::arg("scenario"), py::arg("circuity") = lad::kDefaultCircuity,
      py::arg("speed_kmh") = lad::kDefaultVehicleSpeedKmh, "The single-trip model as CPLEX LP text.");

  m.def(
      "check_assignment",
      [](const lad::Scenario& s, const std::map<std::string, double>& values, double circuity,
         double speed_kmh) {
        const auto r = lad::check_assignment_values(
            s, segments_for(s, travel_model(circuity, speed_kmh, std::nullopt)), values);
        return py::make_tuple(r.feasible, r.total_cost, r.violations);
      },
      py::arg("scenario"), py::arg("values"), py::arg("circuity") = lad::kDefaultCircuity,
      py::arg("speed_kmh") = lad::kDefaultVehicleSpeedKmh,
      "Re-checks an external solver's x_v_g values: (feasible, total_cost, violations).");

  m.def("company_savings", &lad::company_savings, py::arg("solution"), py::arg("budget"));
  m.def("per_vehicle_profit", &lad::per_vehicle_profit, py::arg("savings"), py::arg("n_participating"),
        py::arg("share") = 0.5);
  m.def("break_even_rate", &lad::break_even_rate, py::arg("total_cost"), py::arg("n_customers"));
  m.def("completion_time", &lad::completion_time, py::arg("solution"));
  m.def("round_cents", &lad::round_cents, py::arg("usd"));
  m.def(
      "min_makespan",
      [](const std::vector<double>& jobs, int machines) { return lad::min_makespan(jobs, machines); },
      py::arg("jobs"), py::arg("machines"));
}
