#include "dcss/sensing.hpp"

#include <cmath>

namespace dcss {

double snr_db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double total_snr(double snr_db, int n_samples) {
  return static_cast<double>(n_samples) * snr_db_to_linear(snr_db);
}

Moments statistic_moments(double eta_total, const SensingConfig& cfg) {
  const double ns = cfg.n_samples;
  const double s2 = cfg.noise_var;
  return {(ns + eta_total) * s2, 2.0 * (ns + 2.0 * eta_total) * s2 * s2};
}

double sample_statistic(double eta_total, const SensingConfig& cfg,
                        std::mt19937_64& rng) {
  // BPSK symbol amplitude giving the requested window-total SNR:
  // eta = N_s * a^2 / sigma^2.
  const double amp =
      (eta_total > 0.0)
          ? std::sqrt(eta_total / cfg.n_samples * cfg.noise_var)
          : 0.0;
  std::normal_distribution<double> noise(0.0, std::sqrt(cfg.noise_var));
  std::uniform_int_distribution<int> bit(0, 1);
  double t = 0.0;
  for (int k = 0; k < cfg.n_samples; ++k) {
    const double s = amp > 0.0 ? (bit(rng) ? amp : -amp) : 0.0;
    const double y = s + noise(rng);
    t += y * y;
  }
  return t;
}

double rayleigh_power_gain(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  return e(rng);
}

Eigen::VectorXd assign_snrs_db(double lo_db, double hi_db, int n,
                               bool randomize, std::mt19937_64& rng) {
  Eigen::VectorXd out(n);
  if (randomize) {
    std::uniform_real_distribution<double> u(lo_db, hi_db);
    for (int i = 0; i < n; ++i) out(i) = u(rng);
    return out;
  }
  if (n == 1) {
    out(0) = 0.5 * (lo_db + hi_db);
    return out;
  }
  const double step = (hi_db - lo_db) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out(i) = lo_db + step * i;
  return out;
}

}  // namespace dcss
