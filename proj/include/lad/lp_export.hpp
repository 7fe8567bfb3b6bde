#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lad/model.hpp"
#include "lad/segments.hpp"

namespace lad {

// Writes the single-trip assignment model in CPLEX LP format.
//
// Variables, with vehicles and groups numbered by scenario position
// (node 0 is the depot, node g+1 is group g):
//   x_v_g   binary, vehicle v serves group g
//   y_v     binary, vehicle v participates
//   a_v_i_j binary, vehicle v drives node i -> node j
//   u_v_g   visit order of group g on vehicle v (subtour elimination)
//   D_v W_v T_v  route distance, waiting time and total time of vehicle v
// Rows carry the numbered constraint they encode in a preceding comment.
void export_lp(const Scenario& s, const SegmentCache& cache, std::ostream& out);
void export_lp(const Scenario& s, const SegmentCache& cache, const std::filesystem::path& path);

// Reader for the LP subset written by export_lp.
struct LpRow {
  std::string name;
  std::map<std::string, double> terms;
  std::string sense;  // "<=", ">=", "="
  double rhs = 0.0;
};

struct LpModel {
  bool minimize = true;
  std::map<std::string, double> objective;
  std::vector<LpRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;  // default [0, +inf)
  std::vector<std::string> binaries;
  std::vector<std::string> generals;
  std::vector<std::string> comments;

  const LpRow* row(std::string_view name) const;
  std::vector<std::string> variables() const;
};

LpModel parse_lp(std::istream& in);
LpModel read_lp(const std::filesystem::path& path);

struct LpCheck {
  bool feasible = true;
  double objective = 0.0;
  std::vector<std::string> violations;
};

// Evaluates every row, bound and integrality requirement at `values`
// (missing variables read as 0).
LpCheck check_lp_values(const LpModel& model, const std::map<std::string, double>& values,
                        double tol = 1e-6);

// LP variable values encoding a solution whose vehicles each run one trip.
std::map<std::string, double> lp_values_for(const Scenario& s, const SegmentCache& cache,
                                            const Solution& sol);

// Reads "name value" pairs, one per line; '#' starts a comment.
std::map<std::string, double> read_lp_values(const std::filesystem::path& path);

struct AssignmentCheck {
  bool feasible = true;
  double total_cost = 0.0;
  std::vector<std::string> violations;
};

// Decodes the x_v_g assignment of an external solver's answer and re-checks
// it with the exact solver's feasibility predicate: every group served once,
// per-vehicle capacity, fuel and time, and total cost within budget.
AssignmentCheck check_assignment_values(const Scenario& s, const SegmentCache& cache,
                                        const std::map<std::string, double>& values);

}  // namespace lad
