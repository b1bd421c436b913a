#pragma once

#include <Eigen/Dense>
#include <random>

namespace dcss {

enum class Channel { awgn, rayleigh };
enum class Hypothesis { h0, h1 };

struct SensingConfig {
  int n_samples = 12;      // samples integrated per decision
  double noise_var = 1.0;  // per-sample noise power sigma^2
};

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

// dB <-> linear per-sample SNR.
double snr_db_to_linear(double snr_db);

// Total SNR accumulated over the detection window: eta = N_s * gamma.
double total_snr(double snr_db, int n_samples);

// Gaussian-approximation moments of the energy statistic T = sum_t y_t^2 for
// a given *realized* total SNR eta (eta = 0 under H0):
//   mean = (N_s + eta) * sigma^2,  var = 2 (N_s + 2 eta) * sigma^4.
Moments statistic_moments(double eta_total, const SensingConfig& cfg);

// Draw one energy statistic. Under H1 the received samples are BPSK symbols
// at amplitude sqrt(eta/N_s * sigma^2) plus real white Gaussian noise; under
// H0 (eta_total = 0) they are noise only.
double sample_statistic(double eta_total, const SensingConfig& cfg,
                        std::mt19937_64& rng);

// Squared Rayleigh block-fading gain |h|^2 with unit mean power.
double rayleigh_power_gain(std::mt19937_64& rng);

// Per-user SNR assignment over [lo, hi] dB: evenly spaced and deterministic
// by default; uniform random draws when `randomize` is set.
Eigen::VectorXd assign_snrs_db(double lo_db, double hi_db, int n,
                               bool randomize, std::mt19937_64& rng);

// Single-user decision: busy (H1) iff the statistic strictly exceeds the
// threshold; ties resolve to idle.
inline bool local_decision(double statistic, double threshold) {
  return statistic > threshold;
}

}  // namespace dcss
