#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "lad/model.hpp"
#include "tmpdir.hpp"

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(LAD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  fixtures::TempDir dir;
  std::string path(const std::string& name) { return (dir / name).string(); }
};

TEST_F(Cli, GenIsByteIdentical) {
  ASSERT_EQ(run("--seed 9 gen --customers 50 --vehicles 5 --groups -o " + path("a.json")), 0);
  ASSERT_EQ(run("--seed 9 gen --customers 50 --vehicles 5 --groups -o " + path("b.json")), 0);
  EXPECT_EQ(fixtures::slurp(dir / "a.json"), fixtures::slurp(dir / "b.json"));
  EXPECT_NO_THROW(lad::load_scenario(dir / "a.json"));
}

TEST_F(Cli, GenMix) {
  ASSERT_EQ(run("gen --customers 10 --vehicles 3 --mix 0,0,1 -o " + path("s.json")), 0);
  for (const auto& v : lad::load_scenario(dir / "s.json").vehicles) {
    EXPECT_EQ(v.cap, 14);
    EXPECT_EQ(v.f_avail, 23.0);
  }
}

TEST_F(Cli, SolveAndReport) {
  ASSERT_EQ(run("--seed 3 gen --customers 30 --vehicles 4 --groups -o " + path("s.json")), 0);
  ASSERT_EQ(run("solve " + path("s.json") + " --algo greedy -o " + path("g.json")), 0);
  ASSERT_EQ(run("solve " + path("s.json") + " --algo exact --time-limit 2 -o " + path("e.json")), 0);
  const lad::Solution g = lad::load_solution(dir / "g.json");
  EXPECT_TRUE(g.full_coverage());
  EXPECT_EQ(g.provenance.seed, 0u);
  ASSERT_EQ(run("report " + path("s.json") + " " + path("g.json") + " " + path("e.json") + " -o " +
                path("r.csv")),
            0);
  const std::string csv = fixtures::slurp(dir / "r.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  ASSERT_EQ(run("export-lp " + path("s.json") + " -o " + path("m.lp")), 0);
  EXPECT_NE(fixtures::slurp(dir / "m.lp").find("cover_0"), std::string::npos);
}

TEST_F(Cli, BenchFleetRange) {
  ASSERT_EQ(run("--seed 4 gen --customers 30 --vehicles 6 --groups -o " + path("s.json")), 0);
  ASSERT_EQ(run("bench " + path("s.json") + " --fleet 2:6:2 --algo greedy,exact --time-limit 1 "
                "--no-runtime -o " + path("b.csv")),
            0);
  const std::string csv = fixtures::slurp(dir / "b.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("solve " + path("missing.json")), 3);
  dir.write("bad.json", "{\"depot\": [0, 0]");
  EXPECT_EQ(run("solve " + path("bad.json")), 1);
  EXPECT_EQ(run("gen --customers 0 -o " + path("x.json")), 1);
  EXPECT_EQ(run("no-such-command"), 1);

  dir.write("broke.json", R"({"depot": {"x": 0, "y": 0}, "budget_usd": 0,
    "drone": {"speed_kmh": 60, "range_km": 5, "service_time_s": 60},
    "vehicles": [{"id": "v1", "home": {"x": 0, "y": 0}, "c_mob_usd_per_km": 0.1,
                  "c_stop_usd_per_s": 0.0001, "cap": 5, "t_avail_s": 10000, "f_avail_gal": 10,
                  "f_mob_gal_per_km": 0.03, "f_stop_gal_per_s": 0.0001}],
    "customers": [{"id": "c1", "x": 3, "y": 4}],
    "groups": [{"id": "g1", "members": ["c1"], "waiting_location": {"x": 3, "y": 4},
                "t_delivery_s": 60}]})");
  EXPECT_EQ(run("solve " + path("broke.json") + " --algo exact"), 2);
  EXPECT_EQ(run("solve " + path("broke.json") + " --algo greedy -o " + path("p.json")), 2);
}

}  // namespace
