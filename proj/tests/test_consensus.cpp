#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dcss/consensus.hpp"
#include "dcss/graph.hpp"
#include "dcss/rng.hpp"
#include "dcss/sensing.hpp"

using namespace dcss;

namespace {

Eigen::VectorXd random_weights(int n, std::mt19937_64& rng,
                               double lo = 1.0, double hi = 40.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = std::exp(u(rng));
  return w;
}

Eigen::VectorXd random_state(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(1.0, 60.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

// Runs to numerical consensus on a fixed network and returns the limit value.
// Skewed weight draws can push the mixing rate close to 1, so the budget is
// generous and convergence is asserted rather than assumed.
double fixed_limit(Rule rule, const Graph& g, const Eigen::VectorXd& x0,
                   const Eigen::VectorXd& w) {
  auto rng = substream(0, "fixed-limit");
  const double alpha = 0.9 * max_step_size(rule, g, w);
  const ConsensusTrace tr =
      run_consensus(rule, g, {0.0}, x0, w, alpha, 200000, 1e-11, rng);
  REQUIRE(tr.converged_at.has_value());
  return tr.final_state().mean();
}

}  // namespace

TEST_CASE("rule names round-trip") {
  for (Rule r : kAllRules) CHECK(parse_rule(to_string(r)) == r);
  CHECK_THROWS(parse_rule("nonsense"));
}

TEST_CASE("known-snr weights equal total snr over noise power") {
  Eigen::VectorXd snr_db(2);
  snr_db << 0.0, -10.0;  // eta = 12 and 1.2
  const Eigen::VectorXd w = awgn_weights(snr_db, SensingConfig{});
  CHECK(w(0) == doctest::Approx(12.0));
  CHECK(w(1) == doctest::Approx(1.2));

  const Eigen::VectorXd g = oracle_weights(snr_db);
  CHECK(g(0) == doctest::Approx(1.0));
  CHECK(g(1) == doctest::Approx(0.1));
}

TEST_CASE("window estimator clamps the all-noise case to the floor") {
  const SensingConfig cfg;
  Eigen::MatrixXd history(11, 3);
  history.setConstant(2.0 * cfg.n_samples * cfg.noise_var);
  const Eigen::VectorXd w = estimated_weights(history, cfg);
  for (int i = 0; i < 3; ++i) CHECK(w(i) == doctest::Approx(kWeightFloor));
}

TEST_CASE("window estimator mean matches the statistic-moment prediction") {
  const SensingConfig cfg;
  const int ell = 10, windows = 10000;
  // High enough average SNR that the positivity clamp almost never binds and
  // the raw-mean prediction applies unbiased.
  const double gamma_bar = 4.0;
  const double eta_bar = cfg.n_samples * gamma_bar;
  auto rng = substream(41, "estimator-mean");
  double acc = 0.0;
  for (int t = 0; t < windows; ++t) {
    Eigen::MatrixXd hist(ell + 1, 1);
    for (int p = 0; p <= ell; ++p) {
      const double eta = eta_bar * rayleigh_power_gain(rng);
      hist(p, 0) = sample_statistic(eta, cfg, rng);
    }
    acc += estimated_weights(hist, cfg)(0);
  }
  // E[T] = (N_s + eta_bar) sigma^2 over the window, minus the 2 N_s sigma^2
  // baseline, summed over ell+1 entries and divided by 2 ell.
  const double expect = (ell + 1) *
                        ((cfg.n_samples + eta_bar) * cfg.noise_var -
                         2.0 * cfg.n_samples * cfg.noise_var) /
                        (2.0 * ell);
  CHECK(acc / windows == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("stable step-size bounds match hand calculations") {
  const Graph six = Graph::resolve("topo6");
  const Eigen::VectorXd ones6 = Eigen::VectorXd::Ones(6);
  CHECK(max_step_size(Rule::ac, six, ones6) == doctest::Approx(0.25));
  CHECK(max_step_size(Rule::wac, six, ones6) == doctest::Approx(0.25));

  const Graph pair = Graph::from_edges(2, {{0, 1}});
  const Eigen::VectorXd ones2 = Eigen::VectorXd::Ones(2);
  CHECK(max_step_size(Rule::iwac, pair, ones2) == doctest::Approx(1.0));

  const Graph ten = Graph::resolve("topo10");
  const Eigen::VectorXd ones10 = Eigen::VectorXd::Ones(10);
  CHECK(max_step_size(Rule::wac_ae, ten, ones10) == doctest::Approx(0.2));
}

TEST_CASE("inverse-weight bounds tighten when a weight drops below one") {
  const Graph pair = Graph::from_edges(2, {{0, 1}});
  Eigen::VectorXd w(2);
  w << 0.5, 2.0;
  // wac row loads are degree/weight: max(1/0.5, 1/2, max_degree=1) = 2.
  CHECK(max_step_size(Rule::wac, pair, w) == doctest::Approx(0.5));
  // iwac row loads are neighbor-sum/weight: max(2/0.5, 0.5/2, sums<=2) = 4.
  CHECK(max_step_size(Rule::iwac, pair, w) == doctest::Approx(0.25));
  // wac_ae has no self-weight division; only neighbor sums matter.
  CHECK(max_step_size(Rule::wac_ae, pair, w) == doctest::Approx(0.5));

  // At the bound's 0.99 fraction every row must still be nonnegative.
  for (Rule rule : {Rule::wac, Rule::iwac}) {
    const double alpha = 0.99 * max_step_size(rule, pair, w);
    CHECK(perron_matrix(rule, pair, w, alpha).minCoeff() >= 0.0);
  }
}

TEST_CASE("iteration matrix on a 2-node graph with the half step averages") {
  const Graph pair = Graph::from_edges(2, {{0, 1}});
  const Eigen::MatrixXd p =
      perron_matrix(Rule::ac, pair, Eigen::VectorXd::Ones(2), 0.5);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(0, 1) == doctest::Approx(0.5));
  CHECK(p(1, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("iteration matrices are row stochastic for all rules") {
  const Graph g = Graph::resolve("topo6");
  auto rng = substream(43, "row-sums");
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::VectorXd w = random_weights(6, rng);
    for (Rule rule : kAllRules) {
      const double alpha = 0.9 * max_step_size(rule, g, w);
      const Eigen::MatrixXd p = perron_matrix(rule, g, w, alpha);
      const Eigen::VectorXd sums = p * Eigen::VectorXd::Ones(6);
      for (int i = 0; i < 6; ++i)
        CHECK(std::abs(sums(i) - 1.0) <= 1e-12);
      CHECK(p.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("step size outside the stable range is rejected") {
  const Graph g = Graph::resolve("topo6");
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(6);
  CHECK_THROWS(perron_matrix(Rule::ac, g, w, 0.25));   // bound is exclusive
  CHECK_THROWS(perron_matrix(Rule::ac, g, w, 0.0));
  CHECK_THROWS(perron_matrix(Rule::ac, g, w, -0.1));
}

TEST_CASE("inverse-weight rule preserves the squared-weight functional") {
  const Graph g = Graph::resolve("topo6");
  auto rng = substream(44, "left-eigvec");
  const Eigen::VectorXd w = random_weights(6, rng);
  const double alpha = 0.9 * max_step_size(Rule::iwac, g, w);
  const Eigen::MatrixXd p = perron_matrix(Rule::iwac, g, w, alpha);

  const Eigen::VectorXd v = stationary_weights(p);
  const Eigen::VectorXd w2 = w.cwiseProduct(w) / w.cwiseProduct(w).sum();
  CHECK((v - w2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("plain averaging converges to the arithmetic mean") {
  const Graph g = Graph::resolve("topo6");
  Eigen::VectorXd x0(6);
  x0 << 1, 2, 3, 4, 5, 6;
  const double limit =
      fixed_limit(Rule::ac, g, x0, Eigen::VectorXd::Ones(6));
  CHECK(limit == doctest::Approx(3.5).epsilon(1e-8 / 3.5));
}

TEST_CASE("weighted rules converge to their predicted fixed points") {
  const Graph g = Graph::resolve("topo6");
  auto rng = substream(45, "fixed-points");
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd w = random_weights(6, rng);
    const Eigen::VectorXd x0 = random_state(6, rng);
    const double weighted = w.dot(x0) / w.sum();
    const double squared = w.cwiseProduct(w).dot(x0) / w.cwiseProduct(w).sum();

    CHECK(fixed_limit(Rule::wac, g, x0, w) ==
          doctest::Approx(weighted).epsilon(1e-8));
    CHECK(fixed_limit(Rule::wac_ae, g, x0, w) ==
          doctest::Approx(weighted).epsilon(1e-8));
    CHECK(fixed_limit(Rule::iwac, g, x0, w) ==
          doctest::Approx(squared).epsilon(1e-8));
  }
}

TEST_CASE("unit weights make the weighted rule identical to plain averaging") {
  const Graph g = Graph::resolve("topo6");
  auto rng = substream(46, "equal-w");
  const Eigen::VectorXd x0 = random_state(6, rng);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
  const double alpha = 0.9 * max_step_size(Rule::ac, g, ones);

  auto r1 = substream(46, "run", 1);
  auto r2 = substream(46, "run", 1);
  const ConsensusTrace ac =
      run_consensus(Rule::ac, g, {0.0}, x0, ones, alpha, 40, 1e-12, r1);
  const ConsensusTrace wac =
      run_consensus(Rule::wac, g, {0.0}, x0, ones, alpha, 40, 1e-12, r2);
  REQUIRE(ac.states.size() == wac.states.size());
  for (std::size_t k = 0; k < ac.states.size(); ++k)
    CHECK((ac.states[k] - wac.states[k]).cwiseAbs().maxCoeff() < 1e-12);

  // With every weight equal to c the inverse-weight scaling divides the step
  // by c, so the rule matches plain averaging run at alpha/c.
  const double c = 3.7;
  const Eigen::MatrixXd scaled = perron_matrix(
      Rule::wac, g, Eigen::VectorXd::Constant(6, c), alpha);
  const Eigen::MatrixXd plain = perron_matrix(Rule::ac, g, ones, alpha / c);
  CHECK((scaled - plain).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("each rule conserves its functional along the iteration") {
  auto rng = substream(47, "conservation");
  for (const char* name : {"topo6", "topo10"}) {
    const Graph g = Graph::resolve(name);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd w = random_weights(g.size(), rng);
      const Eigen::VectorXd x0 = random_state(g.size(), rng);
      for (Rule rule : kAllRules) {
        const double alpha = 0.9 * max_step_size(rule, g, w);
        Eigen::VectorXd v;
        switch (rule) {
          case Rule::ac: v = Eigen::VectorXd::Ones(g.size()); break;
          case Rule::wac:
          case Rule::wac_ae: v = w; break;
          case Rule::iwac:
            v = stationary_weights(perron_matrix(rule, g, w, alpha));
            break;
        }
        auto run_rng = substream(47, std::string("run-") + name, trial);
        const ConsensusTrace tr =
            run_consensus(rule, g, {0.0}, x0, w, alpha, 30, 1e-13, run_rng);
        const double f0 = v.dot(tr.states.front());
        for (const Eigen::VectorXd& x : tr.states)
          CHECK(std::abs(v.dot(x) - f0) <= 1e-10 * std::max(1.0, std::abs(f0)));
      }
    }
  }
}

TEST_CASE("link failures leave the fixed point unchanged") {
  const Graph g = Graph::resolve("topo6");
  auto rng = substream(48, "dynamic-fp");
  const Eigen::VectorXd w = random_weights(6, rng);
  const Eigen::VectorXd x0 = random_state(6, rng);

  for (Rule rule : {Rule::ac, Rule::wac, Rule::wac_ae}) {
    const double alpha = 0.9 * max_step_size(rule, g, w);
    const double fixed = fixed_limit(rule, g, x0, w);
    for (double pr_fail : {0.4, 0.8}) {
      auto run_rng = substream(48, "dyn-run-" + to_string(rule),
                               static_cast<std::uint64_t>(pr_fail * 10));
      const ConsensusTrace tr = run_consensus(rule, g, {pr_fail}, x0, w, alpha,
                                              5000, 1e-10, run_rng);
      REQUIRE(tr.converged_at.has_value());
      CHECK(std::abs(tr.final_state().mean() - fixed) <= 1e-6);
    }
  }
}

TEST_CASE("the iteration is scale equivariant") {
  const Graph g = Graph::resolve("topo10");
  auto rng = substream(49, "scale");
  const Eigen::VectorXd w = random_weights(10, rng);
  const Eigen::VectorXd x0 = random_state(10, rng);
  const double c = 7.25;
  for (Rule rule : kAllRules) {
    const double alpha = 0.9 * max_step_size(rule, g, w);
    auto r1 = substream(49, "eq-" + to_string(rule), 0);
    auto r2 = substream(49, "eq-" + to_string(rule), 0);
    const ConsensusTrace a =
        run_consensus(rule, g, {0.3}, x0, w, alpha, 30, 1e-12, r1);
    const ConsensusTrace b =
        run_consensus(rule, g, {0.3}, c * x0, w, alpha, 30, 1e-12, r2);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k)
      CHECK((c * a.states[k] - b.states[k]).cwiseAbs().maxCoeff() <=
            1e-12 * c * a.states[k].maxCoeff());
  }
}

TEST_CASE("two nodes at the half step agree after exactly one iteration") {
  const Graph pair = Graph::from_edges(2, {{0, 1}});
  Eigen::VectorXd x0(2);
  x0 << 100.0, 1.0;
  auto rng = substream(50, "two-node");
  const ConsensusTrace tr = run_consensus(
      Rule::ac, pair, {0.0}, x0, Eigen::VectorXd::Ones(2), 0.5, 10, 1.0, rng);
  REQUIRE(tr.converged_at.has_value());
  CHECK(*tr.converged_at == 1);
  CHECK(tr.final_state()(0) == doctest::Approx(50.5));
  CHECK(tr.final_state()(1) == doctest::Approx(50.5));
}

TEST_CASE("an isolated node is converged before iterating") {
  const Graph solo = Graph::from_edges(1, {});
  Eigen::VectorXd x0(1);
  x0 << 17.0;
  auto rng = substream(50, "solo");
  const ConsensusTrace tr = run_consensus(
      Rule::ac, solo, {0.0}, x0, Eigen::VectorXd::Ones(1), 0.5, 10, 1.0, rng);
  REQUIRE(tr.converged_at.has_value());
  CHECK(*tr.converged_at == 0);
  CHECK(tr.iterations() == 0);
}

TEST_CASE("invalid states are rejected with diagnostics") {
  const Graph pair = Graph::from_edges(2, {{0, 1}});
  auto rng = substream(51, "bad-x0");
  Eigen::VectorXd bad(2);
  bad << 1.0, 0.0;  // dB spread undefined at zero energy
  CHECK_THROWS_AS(run_consensus(Rule::ac, pair, {0.0}, bad,
                                Eigen::VectorXd::Ones(2), 0.5, 10, 1.0, rng),
                  NumericError);
  Eigen::VectorXd ok(2);
  ok << 1.0, 2.0;
  CHECK_THROWS(run_consensus(Rule::ac, pair, {0.0}, ok,
                             Eigen::VectorXd::Ones(2), 1.5, 10, 1.0, rng));
}

TEST_CASE("state spread is measured in decibels") {
  Eigen::VectorXd x(3);
  x << 10.0, 40.0, 100.0;
  CHECK(delta_e_db(x) == doctest::Approx(10.0));
  Eigen::VectorXd bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS(delta_e_db(bad), NumericError);
}

TEST_CASE("network decision compares the converged value with tie to idle") {
  ConsensusTrace tr;
  tr.states.push_back(Eigen::VectorXd::Constant(3, 13.0));
  CHECK(final_decision(tr, 12.0));
  tr.states.back().setConstant(12.0);
  CHECK_FALSE(final_decision(tr, 12.0));
}

TEST_CASE("trace export carries per-iteration states and a summary") {
  const Graph pair = Graph::from_edges(2, {{0, 1}});
  Eigen::VectorXd x0(2);
  x0 << 100.0, 1.0;
  auto rng = substream(52, "trace");
  const ConsensusTrace tr = run_consensus(
      Rule::ac, pair, {0.0}, x0, Eigen::VectorXd::Ones(2), 0.5, 10, 1.0, rng);
  const std::string csv = trace_to_csv(Rule::ac, tr);
  CHECK(csv.find("iteration,su_index,state_db") == 0);
  CHECK(csv.find("0,0,20") != std::string::npos);  // 100 -> 20 dB
  CHECK(csv.find("iters_to_converge=1") != std::string::npos);
}
