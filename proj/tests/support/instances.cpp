#include "instances.hpp"

#include <string>

namespace fixtures {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct TypeRow {
  lad::VehicleType type;
  double c_mob, c_stop, f_avail;
  int cap;
};

const TypeRow kTypes[] = {
    {lad::VehicleType::kType1, 0.1, 0.00013, 13, 7},
    {lad::VehicleType::kType2, 0.12, 0.00033, 15, 9},
    {lad::VehicleType::kType3, 0.15, 0.00071, 23, 14},
};

}  // namespace

lad::Scenario random_instance(std::mt19937_64& rng, const RandomSpec& spec) {
  lad::Scenario s;
  s.id = "rand";
  const double box = spec.box_km;
  s.depot = {uniform(rng, 0, box), uniform(rng, 0, box)};
  s.budget = 1000.0;
  if (spec.tight && uniform(rng, 0, 1) < 0.25) s.budget = uniform(rng, 1.0, 8.0);

  const int ng = uniform_int(rng, spec.min_groups, spec.max_groups);
  int customer = 0;
  for (int g = 0; g < ng; ++g) {
    lad::Group grp;
    grp.id = "g" + std::to_string(g);
    grp.waiting_location = {uniform(rng, 0, box), uniform(rng, 0, box)};
    const int members = uniform_int(rng, 1, spec.max_members);
    for (int m = 0; m < members; ++m) {
      lad::Customer c;
      c.id = "c" + std::to_string(customer++);
      c.position = {grp.waiting_location.x + uniform(rng, -1, 1),
                    grp.waiting_location.y + uniform(rng, -1, 1)};
      grp.members.push_back(c.id);
      s.customers.push_back(c);
    }
    grp.t_delivery = uniform(rng, 100, 1500);
    s.groups.push_back(grp);
  }

  const int nv = uniform_int(rng, spec.min_vehicles, spec.max_vehicles);
  for (int i = 0; i < nv; ++i) {
    const TypeRow& t = kTypes[uniform_int(rng, 0, 2)];
    lad::Vehicle v;
    v.id = "v" + std::to_string(i);
    v.home = {uniform(rng, 0, box), uniform(rng, 0, box)};
    v.type = t.type;
    v.c_mob = t.c_mob;
    v.c_stop = t.c_stop;
    v.cap = spec.tight ? uniform_int(rng, 3, 12) : t.cap;
    v.f_avail = spec.tight && uniform(rng, 0, 1) < 0.3 ? uniform(rng, 0.3, 2.0) : t.f_avail;
    v.f_mob = uniform(rng, 0.02, 0.06);
    v.f_stop = uniform(rng, 0.0, 0.0001);
    v.t_load = uniform(rng, 0, 900);
    v.t_avail = spec.tight && uniform(rng, 0, 1) < 0.3 ? uniform(rng, 3000, 9000) : 43200.0;
    s.vehicles.push_back(v);
  }
  return s;
}

lad::Scenario layout(lad::Point depot, const std::vector<lad::Point>& waits,
                     const std::vector<lad::Point>& homes) {
  lad::Scenario s;
  s.id = "layout";
  s.depot = depot;
  s.budget = 1e6;
  for (std::size_t i = 0; i < waits.size(); ++i) {
    const std::string n = std::to_string(i + 1);
    s.customers.push_back({"c" + n, waits[i]});
    s.groups.push_back({"g" + n, {"c" + n}, waits[i], 0.0});
  }
  for (std::size_t i = 0; i < homes.size(); ++i) {
    lad::Vehicle v;
    v.id = "v" + std::to_string(i + 1);
    v.home = homes[i];
    v.c_mob = 0.1;
    v.c_stop = 0.00013;
    v.cap = 100;
    v.t_avail = 1e7;
    v.f_avail = 1e4;
    s.vehicles.push_back(v);
  }
  return s;
}

lad::Scenario table2_fixture() {
  lad::Scenario s;
  s.id = "table2";
  s.depot = {5, 5};
  s.budget = 2995;
  const lad::Point homes[] = {{1, 1}, {9, 2}, {4, 9}};
  for (int i = 0; i < 3; ++i) {
    const TypeRow& t = kTypes[i];
    lad::Vehicle v;
    v.id = "v" + std::to_string(i + 1);
    v.home = homes[i];
    v.type = t.type;
    v.c_mob = t.c_mob;
    v.c_stop = t.c_stop;
    v.f_avail = t.f_avail;
    v.cap = t.cap;
    v.f_mob = 0.03;
    v.f_stop = 0.00008;
    v.t_avail = 43200;
    s.vehicles.push_back(v);
  }
  const lad::Point spots[] = {{2, 3}, {2.3, 3.2}, {8, 8}, {8.4, 7.9}, {7.9, 8.3}, {6, 2}};
  for (int i = 0; i < 6; ++i) s.customers.push_back({"c" + std::to_string(i + 1), spots[i]});
  s.groups = {
      {"g1", {"c1", "c2"}, {2.15, 3.1}, 420},
      {"g2", {"c3", "c4", "c5"}, {8.1, 8.066666666666666}, 480},
      {"g3", {"c6"}, {6, 2}, 180},
  };
  return s;
}

}  // namespace fixtures
