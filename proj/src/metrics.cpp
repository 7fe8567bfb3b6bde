#include "lad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lad/error.hpp"

namespace lad {

double company_savings(const Solution& sol, double budget) {
  if (!sol.full_coverage()) throw PartialCoverageError(sol.uncovered);
  return budget - sol.total_cost;
}

double per_vehicle_profit(double savings, std::size_t n_participating, double share) {
  std::vector<std::string> errors;
  if (n_participating == 0) errors.emplace_back("per-vehicle profit needs at least one participant");
  if (!(share >= 0.0 && share <= 1.0)) errors.emplace_back("profit share must lie in [0, 1]");
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return share * savings / static_cast<double>(n_participating);
}

double break_even_rate(double total_cost, std::size_t n_customers) {
  if (n_customers == 0) throw ValidationError({"break-even rate needs at least one customer"});
  return total_cost / static_cast<double>(n_customers);
}

double completion_time(const Solution& sol) {
  if (!sol.full_coverage()) throw PartialCoverageError(sol.uncovered);
  double t = 0.0;
  for (const auto& r : sol.routes) t = std::max(t, r.stats.t_tot);
  return t;
}

double round_cents(double usd) {
  // Go through the shortest decimal text so 27.125 rounds up to 27.13 even
  // though its binary value sits a hair below.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", usd * 100.0);
  const double cents = std::strtod(buf, nullptr);
  const double r = cents >= 0 ? std::floor(cents + 0.5) : -std::floor(-cents + 0.5);
  return r / 100.0;
}

std::string format_cents(double usd) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round_cents(usd));
  return buf;
}

ReportRow make_report_row(const std::string& scenario_id, std::size_t fleet_size,
                          const Solution& sol, double budget, double share) {
  ReportRow row;
  row.scenario_id = scenario_id;
  row.algorithm = std::string(to_string(sol.algorithm));
  row.fleet_size = fleet_size;
  row.total_cost = sol.total_cost;
  row.n_participating = sol.n_participating();
  row.uncovered_count = sol.uncovered.size();
  row.time_limit_reached = sol.time_limit_reached;
  if (sol.full_coverage()) {
    row.savings = company_savings(sol, budget);
    if (row.n_participating > 0)
      row.per_vehicle_profit = per_vehicle_profit(*row.savings, row.n_participating, share);
    row.completion_time_s = completion_time(sol);
  } else {
    row.status = "partial";
  }
  return row;
}

const std::vector<std::string> kReportColumns = {
    "scenario_id",      "algorithm",          "fleet_size",      "total_cost",
    "savings",          "n_participating",    "per_vehicle_profit", "completion_time_s",
    "runtime_s",        "uncovered_count",    "time_limit_reached", "status"};

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string money(const std::optional<double>& v) { return v ? format_cents(*v) : ""; }

std::string seconds(const std::optional<double>& v, const char* fmt) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

}  // namespace

void write_report_header(std::ostream& out) {
  for (std::size_t i = 0; i < kReportColumns.size(); ++i)
    out << (i ? "," : "") << kReportColumns[i];
  out << "\n";
}

void write_report_row(std::ostream& out, const ReportRow& r) {
  out << csv_field(r.scenario_id) << ',' << r.algorithm << ',' << r.fleet_size << ','
      << money(r.total_cost) << ',' << money(r.savings) << ',' << r.n_participating << ','
      << money(r.per_vehicle_profit) << ',' << seconds(r.completion_time_s, "%.3f") << ','
      << seconds(r.runtime_s, "%.6f") << ',' << r.uncovered_count << ','
      << (r.time_limit_reached ? "true" : "false") << ',' << csv_field(r.status) << "\n";
}

}  // namespace lad
