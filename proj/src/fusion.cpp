#include "dcss/fusion.hpp"

#include <cmath>
#include <stdexcept>

#include "dcss/mathutil.hpp"

namespace dcss {

bool hard_decide(const std::vector<bool>& votes, HardRule rule) {
  int fired = 0;
  for (bool v : votes) fired += v ? 1 : 0;
  return fired >= rule.k;
}

double k_out_of_n_tail(const std::vector<double>& p, int k) {
  const int n = static_cast<int>(p.size());
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  // dp[m] = P(exactly m of the detectors processed so far fired).
  std::vector<double> dp(n + 1, 0.0);
  dp[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int m = i + 1; m >= 1; --m)
      dp[m] = dp[m] * (1.0 - p[i]) + dp[m - 1] * p[i];
    dp[0] *= 1.0 - p[i];
  }
  double tail = 0.0;
  for (int m = k; m <= n; ++m) tail += dp[m];
  return tail;
}

double binomial_tail(int n, double p, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  double tail = 0.0;
  for (int q = k; q <= n; ++q) {
    // C(n,q) via lgamma keeps n=20 well inside double precision.
    const double logc = std::lgamma(n + 1.0) - std::lgamma(q + 1.0) -
                        std::lgamma(n - q + 1.0);
    double logterm = logc;
    if (q > 0) logterm += q * std::log(p);
    if (n - q > 0) logterm += (n - q) * std::log1p(-p);
    if (p == 0.0)
      tail += (q == 0) ? 1.0 : 0.0;
    else if (p == 1.0)
      tail += (q == n) ? 1.0 : 0.0;
    else
      tail += std::exp(logterm);
  }
  return tail;
}

double soft_statistic(const Eigen::VectorXd& t, const Eigen::VectorXd& rho) {
  if (t.size() != rho.size())
    throw std::invalid_argument("soft_statistic: size mismatch");
  return rho.dot(t);
}

Eigen::VectorXd egc_gains(int n) { return Eigen::VectorXd::Ones(n); }

Eigen::VectorXd mrc_gains(const Eigen::VectorXd& eta_total, double noise_var) {
  return eta_total / noise_var;
}

Moments soft_moments(const Eigen::VectorXd& rho,
                     const Eigen::VectorXd& eta_total,
                     const SensingConfig& cfg) {
  Moments out;
  for (int i = 0; i < rho.size(); ++i) {
    const Moments m = statistic_moments(eta_total(i), cfg);
    out.mean += rho(i) * m.mean;
    out.var += rho(i) * rho(i) * m.var;
  }
  return out;
}

double soft_pd_analytic(const Eigen::VectorXd& rho,
                        const Eigen::VectorXd& eta_total,
                        const SensingConfig& cfg, double pf) {
  if (pf <= 0.0) return 0.0;
  if (pf >= 1.0) return 1.0;
  const Moments m0 =
      soft_moments(rho, Eigen::VectorXd::Zero(eta_total.size()), cfg);
  const Moments m1 = soft_moments(rho, eta_total, cfg);
  const double lambda = m0.mean + std::sqrt(m0.var) * gaussian_q_inv(pf);
  return gaussian_q((lambda - m1.mean) / std::sqrt(m1.var));
}

}  // namespace dcss
