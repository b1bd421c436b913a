#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dcss/sensing.hpp"

namespace dcss {

// k-out-of-N voting rule. OR fires on any vote, AND needs every vote,
// MAJORITY needs ceil(N/2).
struct HardRule {
  int k = 1;
  static HardRule any_of() { return {1}; }
  static HardRule all_of(int n) { return {n}; }
  static HardRule majority(int n) { return {(n + 1) / 2}; }
};

bool hard_decide(const std::vector<bool>& votes, HardRule rule);

// Exact P(at least k of n independent detectors fire) for heterogeneous
// per-detector probabilities, by Poisson-binomial dynamic programming.
double k_out_of_n_tail(const std::vector<double>& p, int k);

// Homogeneous closed form sum_{q=k}^{n} C(n,q) p^q (1-p)^(n-q).
double binomial_tail(int n, double p, int k);

// Linear soft combining T_f = sum_i rho_i T_i.
double soft_statistic(const Eigen::VectorXd& t, const Eigen::VectorXd& rho);

Eigen::VectorXd egc_gains(int n);                            // all ones
Eigen::VectorXd mrc_gains(const Eigen::VectorXd& eta_total,  // SNR-proportional
                          double noise_var);

// Moments of the combined statistic given per-user total SNRs (zeros for H0):
// mean = sum rho_i mu_i, var = sum rho_i^2 var_i.
Moments soft_moments(const Eigen::VectorXd& rho, const Eigen::VectorXd& eta_total,
                     const SensingConfig& cfg);

// Gaussian-approximation detection probability of the soft combiner at a
// threshold calibrated to the given false-alarm probability:
//   Pd = Q( (Q^{-1}(pf) * sd0 - (mu1 - mu0)) / sd1 ).
double soft_pd_analytic(const Eigen::VectorXd& rho,
                        const Eigen::VectorXd& eta_total,
                        const SensingConfig& cfg, double pf);

}  // namespace dcss
