#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lad/model.hpp"

namespace lad {

// budget - total cost. Throws PartialCoverageError when groups are uncovered.
double company_savings(const Solution& sol, double budget);

// share * savings / n_participating. Throws ValidationError for zero
// participants or a share outside [0, 1].
double per_vehicle_profit(double savings, std::size_t n_participating, double share = 0.5);

// Minimum average shipping fee that covers the cost.
double break_even_rate(double total_cost, std::size_t n_customers);

// Largest t_tot over participating vehicles; every vehicle departs at time 0.
double completion_time(const Solution& sol);

// Half-up rounding to whole cents.
double round_cents(double usd);
std::string format_cents(double usd);

// One line of the bench/report CSV.
struct ReportRow {
  std::string scenario_id;
  std::string algorithm;
  std::size_t fleet_size = 0;
  std::optional<double> total_cost;
  std::optional<double> savings;
  std::size_t n_participating = 0;
  std::optional<double> per_vehicle_profit;
  std::optional<double> completion_time_s;
  std::optional<double> runtime_s;
  std::size_t uncovered_count = 0;
  bool time_limit_reached = false;
  std::string status = "ok";  // "ok", "partial", or "error: <message>"
};

// Fills every metric column of a row from a solved instance.
ReportRow make_report_row(const std::string& scenario_id, std::size_t fleet_size,
                          const Solution& sol, double budget, double share = 0.5);

extern const std::vector<std::string> kReportColumns;

void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const ReportRow& row);

}  // namespace lad
