#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "dcss/rng.hpp"
#include "dcss/scenario.hpp"

using namespace dcss;

namespace {

// Writes `text` to a throwaway file in the working directory.
struct TempFile {
  std::string path = "test_scenario_tmp.cfg";
  explicit TempFile(const std::string& text) {
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("named presets fix channel, mobility and snr range") {
  const Scenario a = named_scenario("A", 6);
  CHECK(a.channel == Channel::awgn);
  CHECK(a.pr_fail == 0.0);
  CHECK(a.snr_lo_db == -10.0);
  CHECK(a.snr_hi_db == 0.0);
  CHECK(a.weight_mode == WeightMode::awgn);

  const Scenario b = named_scenario("B", 10);
  CHECK(b.channel == Channel::awgn);
  CHECK(b.pr_fail == doctest::Approx(0.4));
  CHECK(b.su_count == 10);

  const Scenario c = named_scenario("C", 6);
  CHECK(c.channel == Channel::rayleigh);
  CHECK(c.pr_fail == 0.0);
  CHECK(c.snr_lo_db == -2.0);
  CHECK(c.snr_hi_db == 5.0);
  CHECK(c.weight_mode == WeightMode::rayleigh_oracle);

  const Scenario d = named_scenario("D", 20);
  CHECK(d.channel == Channel::rayleigh);
  CHECK(d.pr_fail == doctest::Approx(0.4));
  CHECK(d.weight_mode == WeightMode::rayleigh_oracle);

  // Simulation-wide defaults shared by every preset.
  for (const Scenario& s : {a, b, c, d}) {
    CHECK(s.n_samples == 12);
    CHECK(s.noise_var == 1.0);
    CHECK(s.trials == 5000);
    CHECK(s.seed == 1);
    CHECK(s.alpha_frac == doctest::Approx(0.9));
    CHECK(s.delta_e_db == doctest::Approx(1.0));
    CHECK(s.max_iters == 50);
    CHECK(s.window == 10);
    CHECK_FALSE(s.random_snr);
    CHECK(s.pf_grid.empty());
  }

  CHECK(named_scenario("a", 6).channel == Channel::awgn);  // case-insensitive
  CHECK_THROWS_AS(named_scenario("E", 6), ConfigError);
}

TEST_CASE("false-alarm grid parses lists and linspace forms") {
  const std::vector<double> list = parse_pf_grid("0.1,0.2,0.5");
  REQUIRE(list.size() == 3);
  CHECK(list[1] == doctest::Approx(0.2));

  const std::vector<double> lin = parse_pf_grid("0.05:1.0:20");
  REQUIRE(lin.size() == 20);
  CHECK(lin.front() == doctest::Approx(0.05));
  CHECK(lin.back() == doctest::Approx(1.0));
  CHECK(lin[1] - lin[0] == doctest::Approx(0.05));

  const std::vector<double> single = parse_pf_grid("0.5:0.9:1");
  REQUIRE(single.size() == 1);                  // count 1 collapses to lo
  CHECK(single[0] == doctest::Approx(0.5));

  CHECK_THROWS(parse_pf_grid(""));
  CHECK_THROWS(parse_pf_grid("0.1,oops"));
  CHECK_THROWS(parse_pf_grid("0.5:0.9"));       // missing count
  CHECK_THROWS(parse_pf_grid("0.5:0.9:0"));
}

TEST_CASE("the default grid covers 0.05 to 1 in twenty steps") {
  const Scenario s;
  const std::vector<double> grid = s.effective_pf_grid();
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(1.0));

  Scenario custom;
  custom.pf_grid = {0.5};
  CHECK(custom.effective_pf_grid().size() == 1);
}

TEST_CASE("config files override presets key by key, last key wins") {
  TempFile cfg(
      "# comment line\n"
      "scenario = C\n"
      "trials = 123\n"
      "weight-mode = rayleigh-est\n"
      "trials = 456\n");
  Scenario s = named_scenario("A", 6);
  apply_config_file(s, cfg.path);
  CHECK(s.channel == Channel::rayleigh);
  CHECK(s.trials == 456);
  CHECK(s.weight_mode == WeightMode::rayleigh_est);
  // Fields the file does not mention keep their previous values.
  CHECK(s.su_count == 6);

  CHECK_THROWS_AS(apply_config_file(s, "/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("config lines reject unknown keys and malformed values") {
  Scenario s;
  CHECK_THROWS_AS(apply_config_line(s, "no-such-key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_line(s, "trials", "many"), ConfigError);
  CHECK_THROWS_AS(apply_config_line(s, "snr-lo-db", ""), ConfigError);
  CHECK_THROWS_AS(apply_config_line(s, "weight-mode", "psychic"), ConfigError);

  apply_config_line(s, "pf-grid", "0.25,0.75");
  REQUIRE(s.pf_grid.size() == 2);
  apply_config_line(s, "seed", "99");
  CHECK(s.seed == 99);
  apply_config_line(s, "topology", "topo20");
  CHECK(s.topology == "topo20");
}

TEST_CASE("validation rejects out-of-range settings") {
  const auto broken = [](auto mutate) {
    Scenario s = named_scenario("A", 6);
    mutate(s);
    CHECK_THROWS_AS(s.validate(), ConfigError);
  };
  broken([](Scenario& s) { s.su_count = 0; });
  broken([](Scenario& s) { s.alpha_frac = 1.0; });
  broken([](Scenario& s) { s.alpha_frac = 0.0; });
  broken([](Scenario& s) { s.pf_grid = {0.5, 1.5}; });
  broken([](Scenario& s) { s.pf_grid = {0.0}; });
  broken([](Scenario& s) { s.snr_lo_db = 1.0; });  // above snr_hi_db = 0
  broken([](Scenario& s) { s.window = 0; });
  broken([](Scenario& s) { s.trials = 0; });
  broken([](Scenario& s) { s.noise_var = 0.0; });
  broken([](Scenario& s) { s.max_iters = 0; });
  broken([](Scenario& s) { s.pr_fail = 1.5; });
  broken([](Scenario& s) { s.pr_fail = -0.1; });
  broken([](Scenario& s) { s.delta_e_db = 0.0; });
  broken([](Scenario& s) { s.pf_grid = {0.2, 0.2}; });  // must increase

  CHECK_NOTHROW(named_scenario("D", 20).validate());
}

TEST_CASE("default topologies exist only for the shipped sizes") {
  Scenario s = named_scenario("A", 6);
  CHECK(s.topology_name() == "topo6");
  s.su_count = 10;
  CHECK(s.topology_name() == "topo10");
  s.su_count = 20;
  CHECK(s.topology_name() == "topo20");

  s.su_count = 7;
  CHECK_THROWS_AS(s.topology_name(), ConfigError);

  s.topology = "my_edges.txt";  // explicit choice passes through untouched
  CHECK(s.topology_name() == "my_edges.txt");
}

TEST_CASE("weight modes round-trip through their names") {
  for (WeightMode m :
       {WeightMode::awgn, WeightMode::rayleigh_est, WeightMode::rayleigh_oracle})
    CHECK(parse_weight_mode(to_string(m)) == m);
  CHECK_THROWS(parse_weight_mode("unknown"));
}

TEST_CASE("snr placements are deterministic unless randomization is on") {
  Scenario s = named_scenario("A", 6);
  auto r1 = substream(7, "snr");
  auto r2 = substream(7, "snr");
  const Eigen::VectorXd even1 = scenario_snrs_db(s, r1);
  const Eigen::VectorXd even2 = scenario_snrs_db(s, r2);
  CHECK((even1 - even2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(even1(0) == doctest::Approx(-10.0));
  CHECK(even1(5) == doctest::Approx(0.0));

  s.random_snr = true;
  auto r3 = substream(7, "snr");
  auto r4 = substream(7, "snr");
  const Eigen::VectorXd rnd1 = scenario_snrs_db(s, r3);
  const Eigen::VectorXd rnd2 = scenario_snrs_db(s, r4);
  CHECK((rnd1 - rnd2).cwiseAbs().maxCoeff() == 0.0);  // same stream, same draw
  CHECK((rnd1 - even1).cwiseAbs().maxCoeff() > 1e-9);
  CHECK(rnd1.minCoeff() >= -10.0);
  CHECK(rnd1.maxCoeff() <= 0.0);
}
