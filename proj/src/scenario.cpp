#include "dcss/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dcss/graph.hpp"

namespace dcss {

std::string to_string(WeightMode m) {
  switch (m) {
    case WeightMode::awgn: return "awgn";
    case WeightMode::rayleigh_est: return "rayleigh-est";
    case WeightMode::rayleigh_oracle: return "rayleigh-oracle";
  }
  return "?";
}

WeightMode parse_weight_mode(const std::string& s) {
  if (s == "awgn") return WeightMode::awgn;
  if (s == "rayleigh-est") return WeightMode::rayleigh_est;
  if (s == "rayleigh-oracle") return WeightMode::rayleigh_oracle;
  throw ConfigError("unknown weight mode: " + s +
                    " (expected awgn|rayleigh-est|rayleigh-oracle)");
}

std::string Scenario::topology_name() const {
  if (!topology.empty()) return topology;
  const std::string guess = "topo" + std::to_string(su_count);
  if (Graph::is_builtin(guess)) return guess;
  throw ConfigError("no shipped topology for " + std::to_string(su_count) +
                    " users; pass --topology <file>");
}

std::vector<double> Scenario::effective_pf_grid() const {
  if (!pf_grid.empty()) return pf_grid;
  std::vector<double> g;
  for (int i = 1; i <= 20; ++i) g.push_back(0.05 * i);
  return g;
}

void Scenario::validate() const {
  if (su_count < 1) throw ConfigError("su count must be at least 1");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
  if (noise_var <= 0.0) throw ConfigError("noise variance must be positive");
  if (pr_fail < 0.0 || pr_fail > 1.0)
    throw ConfigError("pr_fail must lie in [0,1]");
  if (snr_hi_db < snr_lo_db) throw ConfigError("SNR range is inverted");
  if (alpha_frac <= 0.0 || alpha_frac >= 1.0)
    throw ConfigError("alpha fraction must lie strictly inside (0,1)");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (delta_e_db <= 0.0)
    throw ConfigError("convergence threshold must be positive");
  if (window < 1) throw ConfigError("estimator window must be at least 1");
  const auto grid = effective_pf_grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 0.0 || grid[i] > 1.0)
      throw ConfigError("pf grid values must lie in (0,1]");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw ConfigError("pf grid must be strictly increasing");
  }
}

Scenario named_scenario(const std::string& name, int su_count) {
  Scenario s;
  s.su_count = su_count;
  if (name == "A" || name == "a") {
    s.name = "A";
  } else if (name == "B" || name == "b") {
    s.name = "B";
    s.pr_fail = 0.4;
  } else if (name == "C" || name == "c") {
    s.name = "C";
    s.channel = Channel::rayleigh;
    s.snr_lo_db = -2.0;
    s.snr_hi_db = 5.0;
    s.weight_mode = WeightMode::rayleigh_oracle;
  } else if (name == "D" || name == "d") {
    s.name = "D";
    s.channel = Channel::rayleigh;
    s.pr_fail = 0.4;
    s.snr_lo_db = -2.0;
    s.snr_hi_db = 5.0;
    s.weight_mode = WeightMode::rayleigh_oracle;
  } else if (name == "custom") {
    s.name = "custom";
  } else {
    throw ConfigError("unknown scenario: " + name +
                      " (expected A|B|C|D|custom)");
  }
  return s;
}

std::vector<double> parse_pf_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double lo, hi;
    int count;
    char c1, c2;
    std::istringstream ss(text);
    if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' ||
        count < 1)
      throw ConfigError("bad pf grid spec: " + text +
                        " (expected lo:hi:count)");
    if (count == 1) {
      grid.push_back(lo);
    } else {
      for (int i = 0; i < count; ++i)
        grid.push_back(lo + (hi - lo) * i / static_cast<double>(count - 1));
    }
    return grid;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad pf grid value: " + item);
    }
  }
  if (grid.empty()) throw ConfigError("empty pf grid");
  return grid;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError("expected integer for " + key + ": " + v);
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("expected boolean for " + key + ": " + v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_line(Scenario& s, const std::string& key,
                       const std::string& value) {
  if (key == "scenario") {
    const Scenario preset = named_scenario(value, s.su_count);
    s.name = preset.name;
    s.channel = preset.channel;
    s.pr_fail = preset.pr_fail;
    s.snr_lo_db = preset.snr_lo_db;
    s.snr_hi_db = preset.snr_hi_db;
    s.weight_mode = preset.weight_mode;
  } else if (key == "sus") {
    s.su_count = to_int(key, value);
  } else if (key == "topology") {
    s.topology = value;
  } else if (key == "trials") {
    s.trials = to_int(key, value);
  } else if (key == "seed") {
    s.seed = static_cast<std::uint64_t>(to_double(key, value));
  } else if (key == "pf-grid") {
    s.pf_grid = parse_pf_grid(value);
  } else if (key == "alpha-frac") {
    s.alpha_frac = to_double(key, value);
  } else if (key == "delta-e-db") {
    s.delta_e_db = to_double(key, value);
  } else if (key == "max-iters") {
    s.max_iters = to_int(key, value);
  } else if (key == "weight-mode") {
    s.weight_mode = parse_weight_mode(value);
  } else if (key == "window") {
    s.window = to_int(key, value);
  } else if (key == "threads") {
    s.threads = to_int(key, value);
  } else if (key == "random-snr") {
    s.random_snr = to_bool(key, value);
  } else if (key == "snr-lo-db") {
    s.snr_lo_db = to_double(key, value);
  } else if (key == "snr-hi-db") {
    s.snr_hi_db = to_double(key, value);
  } else if (key == "pr-fail") {
    s.pr_fail = to_double(key, value);
  } else if (key == "n-samples") {
    s.n_samples = to_int(key, value);
  } else if (key == "noise-var") {
    s.noise_var = to_double(key, value);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

void apply_config_file(Scenario& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    apply_config_line(s, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
}

Eigen::VectorXd scenario_snrs_db(const Scenario& s, std::mt19937_64& rng) {
  return assign_snrs_db(s.snr_lo_db, s.snr_hi_db, s.su_count, s.random_snr,
                        rng);
}

}  // namespace dcss
