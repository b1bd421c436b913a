#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dcss/consensus.hpp"
#include "dcss/fusion.hpp"
#include "dcss/graph.hpp"
#include "dcss/scenario.hpp"

namespace dcss {

// The nine sensing schemes compared on a common Monte-Carlo stream: three
// centralized hard voters, two centralized soft combiners, four distributed
// averaging rules.
enum class Scheme {
  hard_or,
  hard_and,
  hard_majority,
  soft_egc,
  soft_mrc,
  ac,
  wac,
  wac_ae,
  iwac
};

std::vector<Scheme> all_schemes();
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);
bool is_consensus(Scheme s);

struct RocPoint {
  double pf = 0.0;  // calibrated false-alarm target
  double pd = 0.0;  // detection probability (isotonic-cleaned)
  double se = 0.0;  // binomial standard error of pd
};

struct RocCurve {
  Scheme scheme = Scheme::soft_egc;
  int trials = 0;
  std::vector<RocPoint> points;
  std::vector<double> raw_pd;  // pre-cleanup estimates, same grid order
};

// Monte-Carlo ROC over the scenario's pf grid. All schemes see the same
// per-trial energy statistics; thresholds come from empirical idle-channel
// quantiles. Deterministic for a fixed (scenario, seed) at any thread count.
std::vector<RocCurve> estimate_roc(const Scenario& s, const Graph& g,
                                   const std::vector<Scheme>& schemes);

// Closed-form per-user ROC after exactly k fixed-topology iterations: the
// state is Gaussian with mean M mu and covariance M C M^T (M = P^k), read
// out at one user. Requires a fixed network.
RocCurve analytic_local_roc(Rule rule, const Scenario& s, const Graph& g,
                            int su_index, int k_iterations,
                            const std::vector<double>& pf_grid);

// Monte-Carlo counterpart of the above (same fixed iteration count, same
// read-out user) for validating the Gaussian propagation.
RocCurve simulated_local_roc(Rule rule, const Scenario& s, const Graph& g,
                             int su_index, int k_iterations,
                             const std::vector<double>& pf_grid);

struct ConvergenceCell {
  std::string scenario;
  int su_count = 0;
  Rule rule = Rule::ac;
  int realizations = 0;
  double mean_iters = 0.0;     // unconverged runs enter at max_iters + 1
  double unconverged = 0.0;    // fraction that never met the spread threshold
  std::string display;         // mean, or ">N" when the budget dominates
};

// Mean iterations to reach the spread threshold, per rule, over independent
// channel realizations. Each realization redraws SNR placements (and fading
// gains) and starts the iteration from the expected energies of that draw. A
// cell prints ">max_iters" when its mean exceeds the budget or most
// realizations fail to converge within it.
std::vector<ConvergenceCell> convergence_table(const Scenario& s,
                                               const Graph& g,
                                               const std::vector<Rule>& rules,
                                               int realizations);

std::string convergence_cell_display(double mean_iters, double unconverged,
                                     int max_iters);

struct SlemRow {
  Rule rule = Rule::ac;
  double alpha = 0.0;
  double rho2 = 0.0;          // second-largest |eigenvalue| of E[P]
  double rho2_gram = 0.0;     // second-largest eigenvalue of E[P^T P]
  double t_small = 0.0;       // 1 / ln(1/rho2)
  double t_large = 0.0;       // log(n) / (1 - rho2_gram)
};

// Spectral convergence-time metrics per rule on the scenario's topology and
// link model, using the scenario's (deterministic) weight assignment.
std::vector<SlemRow> slem_report(const Scenario& s, const Graph& g);

// Second-largest eigenvalue modulus of a row-stochastic matrix.
double slem(const Eigen::MatrixXd& P);

// Expected Gram matrix E[P^T P] under independent per-edge failures, exact
// via the edge-wise second-moment expansion.
Eigen::MatrixXd expected_gram(Rule rule, const Graph& g,
                              const Eigen::VectorXd& w, double alpha,
                              double pr_fail);

struct ComplexityRow {
  Rule rule = Rule::ac;
  std::string order;                              // asymptotic class per step
  std::vector<std::pair<int, double>> micros;     // (n, measured us/iter)
};

// Asymptotic per-iteration cost class alongside measured wall time on
// growing ring networks. Timings are informational (stdout only) so file
// outputs stay bit-reproducible.
std::vector<ComplexityRow> complexity_report();

}  // namespace dcss
