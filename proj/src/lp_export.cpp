#include "lad/lp_export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "lad/error.hpp"
#include "lad/exact.hpp"

namespace lad {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string idx(std::size_t i) { return std::to_string(i); }

std::string x_var(std::size_t v, std::size_t g) { return "x_" + idx(v) + "_" + idx(g); }
std::string y_var(std::size_t v) { return "y_" + idx(v); }
std::string a_var(std::size_t v, std::size_t i, std::size_t j) {
  return "a_" + idx(v) + "_" + idx(i) + "_" + idx(j);
}
std::string u_var(std::size_t v, std::size_t g) { return "u_" + idx(v) + "_" + idx(g); }
std::string d_var(std::size_t v) { return "D_" + idx(v); }
std::string w_var(std::size_t v) { return "W_" + idx(v); }
std::string t_var(std::size_t v) { return "T_" + idx(v); }

// Linear expression written as " + c var" / " - c var" terms.
class Expr {
 public:
  Expr& add(double coef, const std::string& var) {
    if (coef != 0.0) terms_.emplace_back(coef, var);
    return *this;
  }

  // An empty expression is written as "0 <fallback>" so the row stays parseable.
  std::string str(const std::string& fallback = "y_0") const {
    std::string out;
    bool first = true;
    for (const auto& [c, var] : terms_) {
      if (first) {
        out += c < 0 ? "- " : "";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      const double mag = std::abs(c);
      if (mag != 1.0) out += num(mag) + " ";
      out += var;
      first = false;
    }
    return out.empty() ? "0 " + fallback : out;
  }

 private:
  std::vector<std::pair<double, std::string>> terms_;
};

}  // namespace

void export_lp(const Scenario& s, const SegmentCache& cache, std::ostream& out) {
  const std::size_t nv = s.vehicles.size();
  const std::size_t ng = s.groups.size();
  const std::size_t nodes = ng + 1;
  auto dist = [&](std::size_t i, std::size_t j) {
    if (i == 0) return cache.d_fw(j - 1);
    if (j == 0) return cache.d_wf(i - 1);
    return cache.d_ww(i - 1, j - 1);
  };
  auto time = [&](std::size_t i, std::size_t j) {
    if (i == 0) return cache.t_fw(j - 1);
    if (j == 0) return cache.t_wf(i - 1);
    return cache.t_ww(i - 1, j - 1);
  };

  out << "\\ Last-mile delivery with autonomous vehicles and drones: assignment model\n";
  out << "\\ node 0 = depot\n";
  for (std::size_t v = 0; v < nv; ++v) out << "\\ vehicle " << v << " = " << s.vehicles[v].id << "\n";
  for (std::size_t g = 0; g < ng; ++g)
    out << "\\ group " << g << " = " << s.groups[g].id << " (node " << g + 1 << ")\n";

  Expr cost;
  for (std::size_t v = 0; v < nv; ++v)
    cost.add(s.vehicles[v].c_mob, d_var(v)).add(s.vehicles[v].c_stop, w_var(v));

  out << "Minimize\n";
  out << "\\ sum over vehicles of c_mob * d_tot + c_stop * t_wait\n";
  out << " cost: " << cost.str() << "\n";
  out << "Subject To\n";

  out << "\\ (1) every group is served by exactly one vehicle\n";
  for (std::size_t g = 0; g < ng; ++g) {
    Expr e;
    for (std::size_t v = 0; v < nv; ++v) e.add(1.0, x_var(v, g));
    out << " cover_" << g << ": " << e.str() << " = 1\n";
  }

  out << "\\ (2) total cost within the budget\n";
  out << " budget: " << cost.str() << " <= " << num(s.budget) << "\n";

  out << "\\ (3) parcels per vehicle within capacity\n";
  for (std::size_t v = 0; v < nv; ++v) {
    Expr e;
    for (std::size_t g = 0; g < ng; ++g) e.add(s.groups[g].size(), x_var(v, g));
    out << " cap_" << v << ": " << e.str() << " <= " << s.vehicles[v].cap << "\n";
  }

  out << "\\ (4) fuel within the available stock\n";
  for (std::size_t v = 0; v < nv; ++v) {
    Expr e;
    e.add(s.vehicles[v].f_mob, d_var(v)).add(s.vehicles[v].f_stop, w_var(v));
    out << " fuel_" << v << ": " << e.str(d_var(v)) << " <= "
        << num(s.vehicles[v].f_avail) << "\n";
  }

  out << "\\ (5) total time within the available time\n";
  for (std::size_t v = 0; v < nv; ++v)
    out << " time_" << v << ": " << t_var(v) << " <= " << num(s.vehicles[v].t_avail) << "\n";

  out << "\\ (6) waiting time is the sum of the served groups' delivery times\n";
  for (std::size_t v = 0; v < nv; ++v) {
    Expr e;
    e.add(1.0, w_var(v));
    for (std::size_t g = 0; g < ng; ++g) e.add(-s.groups[g].t_delivery, x_var(v, g));
    out << " wait_" << v << ": " << e.str() << " = 0\n";
  }

  out << "\\ route distance and total time\n";
  for (std::size_t v = 0; v < nv; ++v) {
    Expr d;
    d.add(1.0, d_var(v)).add(-(cache.d_vf(v) + cache.d_fv(v)), y_var(v));
    Expr t;
    t.add(1.0, t_var(v))
        .add(-(cache.t_vf(v) + cache.t_fv(v) + s.vehicles[v].t_load), y_var(v))
        .add(-1.0, w_var(v));
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t j = 0; j < nodes; ++j) {
        if (i == j) continue;
        d.add(-dist(i, j), a_var(v, i, j));
        t.add(-time(i, j), a_var(v, i, j));
      }
    }
    out << " dist_" << v << ": " << d.str() << " = 0\n";
    out << " ttot_" << v << ": " << t.str() << " = 0\n";
  }

  out << "\\ routing: one depot-anchored tour through the assigned groups\n";
  for (std::size_t v = 0; v < nv; ++v) {
    Expr dep_out, dep_in;
    for (std::size_t g = 0; g < ng; ++g) {
      dep_out.add(1.0, a_var(v, 0, g + 1));
      dep_in.add(1.0, a_var(v, g + 1, 0));
    }
    dep_out.add(-1.0, y_var(v));
    dep_in.add(-1.0, y_var(v));
    out << " depout_" << v << ": " << dep_out.str() << " = 0\n";
    out << " depin_" << v << ": " << dep_in.str() << " = 0\n";
    for (std::size_t g = 0; g < ng; ++g) {
      Expr in, outflow;
      for (std::size_t i = 0; i < nodes; ++i) {
        if (i == g + 1) continue;
        in.add(1.0, a_var(v, i, g + 1));
        outflow.add(1.0, a_var(v, g + 1, i));
      }
      in.add(-1.0, x_var(v, g));
      outflow.add(-1.0, x_var(v, g));
      out << " in_" << v << "_" << g << ": " << in.str() << " = 0\n";
      out << " out_" << v << "_" << g << ": " << outflow.str() << " = 0\n";
      out << " use_" << v << "_" << g << ": " << x_var(v, g) << " - " << y_var(v) << " <= 0\n";
    }
  }

  out << "\\ subtour elimination (visit order)\n";
  const double big = static_cast<double>(ng);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t g = 0; g < ng; ++g) {
      for (std::size_t h = 0; h < ng; ++h) {
        if (g == h) continue;
        out << " mtz_" << v << "_" << g << "_" << h << ": " << u_var(v, g) << " - " << u_var(v, h)
            << " + " << num(big) << " " << a_var(v, g + 1, h + 1) << " <= " << num(big - 1.0)
            << "\n";
      }
    }
  }

  out << "Bounds\n";
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t g = 0; g < ng; ++g)
      out << " 1 <= " << u_var(v, g) << " <= " << num(std::max(1.0, big)) << "\n";

  out << "Binaries\n";
  for (std::size_t v = 0; v < nv; ++v) {
    out << " " << y_var(v) << "\n";
    for (std::size_t g = 0; g < ng; ++g) out << " " << x_var(v, g) << "\n";
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < nodes; ++j)
        if (i != j) out << " " << a_var(v, i, j) << "\n";
  }
  out << "End\n";
}

void export_lp(const Scenario& s, const SegmentCache& cache, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write LP file '" + path.string() + "'");
  export_lp(s, cache, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------

const LpRow* LpModel::row(std::string_view name) const {
  for (const auto& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

std::vector<std::string> LpModel::variables() const {
  std::set<std::string> vars;
  for (const auto& [v, _] : objective) vars.insert(v);
  for (const auto& r : rows)
    for (const auto& [v, _] : r.terms) vars.insert(v);
  for (const auto& [v, _] : bounds) vars.insert(v);
  for (const auto& v : binaries) vars.insert(v);
  for (const auto& v : generals) vars.insert(v);
  return {vars.begin(), vars.end()};
}

namespace {

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  char* end = nullptr;
  std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

// Parses "[+|-] [coef] var ..." into terms; returns trailing tokens that
// are not part of the expression (comparison and right-hand side).
std::map<std::string, double> parse_terms(const std::vector<std::string>& toks, std::size_t& i,
                                          const std::string& context) {
  std::map<std::string, double> terms;
  double sign = 1.0;
  double coef = 1.0;
  bool have_coef = false;
  bool dangling = false;  // a sign or coefficient still waiting for its variable
  for (; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>") break;
    if (t == "+") {
      dangling = true;
      continue;
    }
    if (t == "-") {
      sign = -sign;
      dangling = true;
      continue;
    }
    if (is_number(t)) {
      coef = std::strtod(t.c_str(), nullptr);
      have_coef = true;
      dangling = true;
      continue;
    }
    terms[t] += sign * coef;
    sign = 1.0;
    coef = 1.0;
    have_coef = false;
    dangling = false;
  }
  if (have_coef && coef != 0.0) throw ParseError(context + ": constant term in expression");
  if (dangling) throw ParseError(context + ": expression ends with an operator");
  return terms;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) toks.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      if (i + 1 < line.size() && (line[i + 1] == '=' || line[i + 1] == '<' || line[i + 1] == '>')) {
        op += line[++i];
      }
      toks.push_back(op);
    } else if ((c == '+' || c == '-') &&
               (cur.empty() || (cur.back() != 'e' && cur.back() != 'E') || !is_number(cur + "0"))) {
      flush();
      toks.emplace_back(1, c);
    } else {
      cur += c;
    }
  }
  flush();
  // A sign right after a comparison (or opening a line) belongs to the number after it.
  std::vector<std::string> merged;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    const bool after_op = merged.empty() || merged.back().find_first_of("<>=") != std::string::npos;
    if ((toks[k] == "-" || toks[k] == "+") && after_op && k + 1 < toks.size() &&
        is_number(toks[k + 1])) {
      merged.push_back(toks[k] + toks[k + 1]);
      ++k;
    } else {
      merged.push_back(toks[k]);
    }
  }
  return merged;
}

}  // namespace

LpModel parse_lp(std::istream& in) {
  LpModel m;
  enum class Section { kNone, kObjective, kRows, kBounds, kBinaries, kGenerals, kEnd };
  Section sec = Section::kNone;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string ctx = "LP line " + std::to_string(line_no);
    if (auto p = line.find('\\'); p != std::string::npos) {
      m.comments.push_back(line.substr(p + 1));
      line = line.substr(0, p);
    }
    std::string lower;
    for (char c : line) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto first = lower.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::string head = lower.substr(first);
    auto starts = [&](const char* kw) { return head.rfind(kw, 0) == 0; };
    if (starts("minimize") || starts("minimum") || starts("min")) {
      if (head.find(':') == std::string::npos) {
        sec = Section::kObjective;
        m.minimize = true;
        continue;
      }
    }
    if (starts("maximize") || starts("maximum")) {
      sec = Section::kObjective;
      m.minimize = false;
      continue;
    }
    if (starts("subject to") || starts("such that") || starts("st") || starts("s.t.")) {
      if (head.find(':') == std::string::npos) {
        sec = Section::kRows;
        continue;
      }
    }
    if (starts("bounds")) {
      sec = Section::kBounds;
      continue;
    }
    if (starts("binaries") || starts("binary")) {
      sec = Section::kBinaries;
      continue;
    }
    if (starts("generals") || starts("general")) {
      sec = Section::kGenerals;
      continue;
    }
    if (starts("end")) {
      sec = Section::kEnd;
      continue;
    }

    std::string body = line;
    std::string name;
    if (auto colon = body.find(':'); colon != std::string::npos) {
      name = body.substr(0, colon);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      body = body.substr(colon + 1);
    }
    auto toks = tokenize(body);
    std::size_t i = 0;
    switch (sec) {
      case Section::kObjective:
        for (const auto& [v, c] : parse_terms(toks, i, ctx)) m.objective[v] += c;
        break;
      case Section::kRows: {
        LpRow row;
        row.name = name.empty() ? "r" + std::to_string(m.rows.size()) : name;
        row.terms = parse_terms(toks, i, ctx);
        if (i + 2 != toks.size()) throw ParseError(ctx + ": expected '<expr> <op> <rhs>'");
        row.sense = toks[i] == "=<" ? "<=" : toks[i] == "=>" ? ">=" : toks[i];
        if (!is_number(toks[i + 1])) throw ParseError(ctx + ": right-hand side is not a number");
        row.rhs = std::strtod(toks[i + 1].c_str(), nullptr);
        m.rows.push_back(std::move(row));
        break;
      }
      case Section::kBounds: {
        constexpr double kInf = std::numeric_limits<double>::infinity();
        // "lo <= var <= hi", "var >= lo", "var <= hi" or "var free".
        if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
          m.bounds[toks[2]] = {std::strtod(toks[0].c_str(), nullptr),
                               std::strtod(toks[4].c_str(), nullptr)};
        } else if (toks.size() == 3 && (toks[1] == "<=" || toks[1] == ">=")) {
          auto& b = m.bounds.try_emplace(toks[0], 0.0, kInf).first->second;
          const double v = std::strtod(toks[2].c_str(), nullptr);
          (toks[1] == "<=" ? b.second : b.first) = v;
        } else if (toks.size() == 2 && (toks[1] == "free" || toks[1] == "Free")) {
          m.bounds[toks[0]] = {-kInf, kInf};
        } else {
          throw ParseError(ctx + ": unsupported bound");
        }
        break;
      }
      case Section::kBinaries:
        for (const auto& t : toks) m.binaries.push_back(t);
        break;
      case Section::kGenerals:
        for (const auto& t : toks) m.generals.push_back(t);
        break;
      case Section::kNone:
      case Section::kEnd:
        throw ParseError(ctx + ": content outside any section");
    }
  }
  return m;
}

LpModel read_lp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open LP file '" + path.string() + "'");
  return parse_lp(in);
}

LpCheck check_lp_values(const LpModel& model, const std::map<std::string, double>& values,
                        double tol) {
  LpCheck out;
  auto value = [&](const std::string& v) {
    auto it = values.find(v);
    return it == values.end() ? 0.0 : it->second;
  };
  for (const auto& [v, c] : model.objective) out.objective += c * value(v);
  for (const auto& r : model.rows) {
    double lhs = 0.0;
    for (const auto& [v, c] : r.terms) lhs += c * value(v);
    const double slack = tol * std::max(1.0, std::abs(r.rhs));
    const bool ok = r.sense == "<=" ? lhs <= r.rhs + slack
                    : r.sense == ">=" ? lhs >= r.rhs - slack
                                      : std::abs(lhs - r.rhs) <= slack;
    if (!ok)
      out.violations.push_back("row " + r.name + ": " + num(lhs) + " " + r.sense + " " + num(r.rhs));
  }
  std::set<std::string> binary(model.binaries.begin(), model.binaries.end());
  std::set<std::string> integer(model.generals.begin(), model.generals.end());
  for (const auto& v : model.variables()) {
    const double x = value(v);
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    if (auto it = model.bounds.find(v); it != model.bounds.end()) std::tie(lo, hi) = it->second;
    if (binary.contains(v)) {
      lo = 0.0;
      hi = 1.0;
      if (std::abs(x - std::round(x)) > tol) out.violations.push_back(v + ": not integral");
    }
    if (integer.contains(v) && std::abs(x - std::round(x)) > tol)
      out.violations.push_back(v + ": not integral");
    if (x < lo - tol || x > hi + tol)
      out.violations.push_back(v + ": " + num(x) + " outside [" + num(lo) + ", " + num(hi) + "]");
  }
  out.feasible = out.violations.empty();
  return out;
}

std::map<std::string, double> lp_values_for(const Scenario& s, const SegmentCache& cache,
                                            const Solution& sol) {
  const std::size_t nv = s.vehicles.size();
  const std::size_t ng = s.groups.size();
  std::map<std::string, double> values;
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t g = 0; g < ng; ++g) values[u_var(v, g)] = 1.0;
  for (const auto& route : sol.routes) {
    if (route.trips.size() != 1)
      throw ValidationError({"vehicle '" + route.vehicle_id + "' runs " +
                             std::to_string(route.trips.size()) +
                             " trips; the LP model has one trip per vehicle"});
    const std::size_t v = cache.vehicle_index(route.vehicle_id);
    values[y_var(v)] = 1.0;
    std::size_t prev = 0;
    for (std::size_t pos = 0; pos < route.trips[0].size(); ++pos) {
      const std::size_t g = cache.group_index(route.trips[0][pos]);
      values[x_var(v, g)] = 1.0;
      values[u_var(v, g)] = static_cast<double>(pos + 1);
      values[a_var(v, prev, g + 1)] = 1.0;
      prev = g + 1;
    }
    values[a_var(v, prev, 0)] = 1.0;
    values[d_var(v)] = route.stats.d_tot;
    values[w_var(v)] = route.stats.t_wait;
    values[t_var(v)] = route.stats.t_tot;
  }
  return values;
}

std::map<std::string, double> read_lp_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open solution values '" + path.string() + "'");
  std::map<std::string, double> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto p = line.find('#'); p != std::string::npos) line.resize(p);
    std::istringstream ss(line);
    std::string name, value;
    if (!(ss >> name)) continue;
    if (!(ss >> value) || !is_number(value))
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 'name value'");
    out[name] = std::strtod(value.c_str(), nullptr);
  }
  return out;
}

AssignmentCheck check_assignment_values(const Scenario& s, const SegmentCache& cache,
                                        const std::map<std::string, double>& values) {
  AssignmentCheck out;
  const std::size_t nv = s.vehicles.size();
  const std::size_t ng = s.groups.size();
  std::vector<std::vector<std::size_t>> assigned(nv);
  for (std::size_t g = 0; g < ng; ++g) {
    int servers = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      auto it = values.find(x_var(v, g));
      if (it != values.end() && it->second > 0.5) {
        assigned[v].push_back(g);
        ++servers;
      }
    }
    if (servers != 1)
      out.violations.push_back("(1) group '" + s.groups[g].id + "' served by " +
                               std::to_string(servers) + " vehicles");
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (assigned[v].empty()) continue;
    const VehicleCost vc = vehicle_route_cost(s.vehicles[v], v, assigned[v], cache, s);
    if (!vc.feasible())
      out.violations.push_back("vehicle '" + s.vehicles[v].id + "' violates " +
                               std::string(to_string(vc.status)));
    out.total_cost += vc.stats.cost;
  }
  if (out.total_cost > s.budget)
    out.violations.push_back("(2) total cost " + num(out.total_cost) + " exceeds budget " +
                             num(s.budget));
  out.feasible = out.violations.empty();
  return out;
}

}  // namespace lad
