#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcss/sensing.hpp"

namespace dcss {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class WeightMode { awgn, rayleigh_est, rayleigh_oracle };
std::string to_string(WeightMode m);
WeightMode parse_weight_mode(const std::string& s);

// One experiment configuration. Named presets A-D fix the channel, mobility
// and SNR range; everything else has simulation-wide defaults and can be
// overridden by a config file and/or command-line flags (flags win).
struct Scenario {
  std::string name = "custom";
  Channel channel = Channel::awgn;
  double pr_fail = 0.0;  // > 0 means links are resampled every iteration
  int su_count = 6;
  double snr_lo_db = -10.0;
  double snr_hi_db = 0.0;
  int n_samples = 12;
  double noise_var = 1.0;
  int trials = 5000;
  std::uint64_t seed = 1;
  std::string topology;  // builtin name or edge-list path; "" = by su_count
  double alpha_frac = 0.9;      // step size as a fraction of the stable bound
  double delta_e_db = 1.0;      // convergence spread threshold
  int max_iters = 50;
  WeightMode weight_mode = WeightMode::awgn;
  int window = 10;              // estimator window length ell
  bool random_snr = false;      // uniform draws instead of even spacing
  int threads = 0;              // 0 = hardware concurrency
  std::vector<double> pf_grid;  // empty = 0.05, 0.10, ..., 1.00

  SensingConfig sensing() const { return {n_samples, noise_var}; }
  std::string topology_name() const;       // resolves the default by su_count
  std::vector<double> effective_pf_grid() const;
  void validate() const;                   // throws ConfigError
};

// Presets: A = fixed AWGN [-10,0] dB; B = mobile AWGN (pr_fail 0.4);
// C = fixed Rayleigh [-2,5] dB; D = mobile Rayleigh (pr_fail 0.4).
// Rayleigh presets default to oracle weights.
Scenario named_scenario(const std::string& name, int su_count);

// Flat key=value overrides ('#' comments). Keys mirror the CLI flag names.
void apply_config_file(Scenario& s, const std::string& path);
void apply_config_line(Scenario& s, const std::string& key,
                       const std::string& value);

// Comma list ("0.1,0.2") or "lo:hi:count" linspace.
std::vector<double> parse_pf_grid(const std::string& text);

// The per-user SNR assignment for one realization. Even spacing reads no
// randomness; the random mode consumes the provided stream.
Eigen::VectorXd scenario_snrs_db(const Scenario& s, std::mt19937_64& rng);

}  // namespace dcss
