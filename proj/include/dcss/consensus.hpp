#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcss/graph.hpp"
#include "dcss/sensing.hpp"

namespace dcss {

// Raised when an iteration produces an invalid state (e.g. nonpositive
// energies caused by an out-of-range step size).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The four distributed averaging rules. "ae" marks the variants built on the
// neighbor-weighted Laplacian; "wac"/"iwac" additionally scale updates by the
// inverse of each node's own weight.
enum class Rule { ac, wac, wac_ae, iwac };

constexpr std::array<Rule, 4> kAllRules{Rule::ac, Rule::wac, Rule::wac_ae,
                                        Rule::iwac};
std::string to_string(Rule r);
Rule parse_rule(const std::string& s);

// Weights are clamped below at this floor: the window estimator can emit
// nonpositive raw values at low SNR, and the inverse-weight rules need a
// strictly positive diagonal.
constexpr double kWeightFloor = 1e-6;

// Known-SNR weights for the non-fading channel: omega_i = eta_i / sigma_i^2
// with eta the window-total SNR.
Eigen::VectorXd awgn_weights(const Eigen::VectorXd& snr_db,
                             const SensingConfig& cfg);

// Fading channel with perfectly known average SNRs: omega_i = mean SNR
// (per-sample, linear).
Eigen::VectorXd oracle_weights(const Eigen::VectorXd& snr_db);

// Window estimator over the last ell+1 energy statistics (rows of `history`,
// oldest first): omega_i = (1/(2*ell)) * sum_p (T_{i,p} - 2 N_s sigma^2),
// clamped at kWeightFloor.
Eigen::VectorXd estimated_weights(const Eigen::MatrixXd& history,
                                  const SensingConfig& cfg);

// Largest step size keeping every Perron row nonnegative: 1/max_degree for
// ac, 1/max_i(sum of neighbor weights) for wac_ae. The inverse-weight rules
// divide each row's load by the node's own weight, so their bounds gain a
// min_i(omega_i / load_i) term that only bites when some weight drops below
// one (e.g. the estimator floor after a deep fade).
// Infinite for an edgeless graph (the iteration is the identity).
double max_step_size(Rule rule, const Graph& g, const Eigen::VectorXd& w);

// Row-stochastic iteration matrix I - alpha * (scaled Laplacian).
Eigen::MatrixXd perron_matrix(Rule rule, const Graph& g,
                              const Eigen::VectorXd& w, double alpha);

// Left eigenvector of P for eigenvalue 1, normalized to sum 1. What the
// iteration conserves - and therefore its limit - is this vector's dot
// product with the state.
Eigen::VectorXd stationary_weights(const Eigen::MatrixXd& P);

// Spread of the state in dB: max_i 10 log10 x_i - min_i 10 log10 x_i.
double delta_e_db(const Eigen::VectorXd& x);

struct LinkModel {
  double pr_fail = 0.0;  // per-edge, per-iteration failure probability
};

struct ConsensusTrace {
  std::vector<Eigen::VectorXd> states;  // x(0..K)
  std::vector<double> spread_db;        // delta-E per recorded state
  std::optional<int> converged_at;      // first k with spread <= threshold

  const Eigen::VectorXd& final_state() const { return states.back(); }
  int iterations() const { return static_cast<int>(states.size()) - 1; }
};

// Runs x(k+1) = P(k) x(k) until the dB spread falls below the threshold or
// max_iters steps have been taken. Under link failures the topology is
// resampled and the Perron matrix rebuilt every step; alpha is validated
// against the *base* graph, whose bound only tightens when links drop.
ConsensusTrace run_consensus(Rule rule, const Graph& g, LinkModel links,
                             Eigen::VectorXd x0, const Eigen::VectorXd& w,
                             double alpha, int max_iters,
                             double spread_threshold_db, std::mt19937_64& rng);

// Network-wide decision: busy iff the converged value exceeds the threshold
// (ties resolve to idle, matching the single-user convention).
bool final_decision(const ConsensusTrace& trace, double threshold);

// Writes a trace as CSV rows (iteration, su_index, state_db) followed by a
// summary line. Used for the per-rule example traces the converge command
// emits.
std::string trace_to_csv(Rule rule, const ConsensusTrace& trace);

}  // namespace dcss
