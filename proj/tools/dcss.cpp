// Command-line front end: Monte-Carlo ROC curves (roc), convergence-speed
// tables (converge) and spectral mixing-time reports (slem) for cooperative
// spectrum sensing over a secondary-user network.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcss/analysis.hpp"
#include "dcss/consensus.hpp"
#include "dcss/graph.hpp"
#include "dcss/rng.hpp"
#include "dcss/scenario.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dcss;

namespace {

constexpr const char* kVersion = "0.1.0";

// Every subcommand takes the same configuration surface. Values are kept as
// strings and funneled through the config-line parser so the command line,
// config files and preset names share one validation path; precedence is
// preset < config file < flags, key by key ("--scenario" on the command line
// re-applies that preset's channel-defining keys before the other flags).
struct CommonOpts {
  CLI::App* cmd = nullptr;
  std::string scenario, sus, topology, trials, seed, pf_grid, alpha_frac,
      delta_e_db, max_iters, weight_mode, window, threads, snr_lo, snr_hi,
      pr_fail, n_samples, noise_var, config;
  std::string out = "out";
  bool random_snr = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  o.cmd = cmd;
  cmd->add_option("--scenario", o.scenario,
                  "Preset A|B|C|D (channel, mobility, SNR range) or 'custom'");
  cmd->add_option("--sus", o.sus, "Number of secondary users");
  cmd->add_option("--topology", o.topology,
                  "Builtin name (topo6, topo10, topo20) or edge-list file");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials per hypothesis");
  cmd->add_option("--seed", o.seed, "Master RNG seed");
  cmd->add_option("--pf-grid", o.pf_grid,
                  "False-alarm grid: comma list or lo:hi:count");
  cmd->add_option("--alpha-frac", o.alpha_frac,
                  "Step size as a fraction of the stable bound, in (0,1)");
  cmd->add_option("--delta-e-db", o.delta_e_db,
                  "Convergence spread threshold in dB");
  cmd->add_option("--max-iters", o.max_iters, "Iteration budget per run");
  cmd->add_option("--weight-mode", o.weight_mode,
                  "awgn | rayleigh-est | rayleigh-oracle");
  cmd->add_option("--window", o.window, "Estimator window length");
  cmd->add_option("--threads", o.threads,
                  "Worker threads (0 = hardware; never affects results)");
  cmd->add_option("--snr-lo-db", o.snr_lo, "Lower end of the SNR range");
  cmd->add_option("--snr-hi-db", o.snr_hi, "Upper end of the SNR range");
  cmd->add_option("--pr-fail", o.pr_fail,
                  "Per-link, per-iteration failure probability");
  cmd->add_option("--n-samples", o.n_samples, "Samples per energy statistic");
  cmd->add_option("--noise-var", o.noise_var, "Per-sample noise power");
  cmd->add_flag("--random-snr", o.random_snr,
                "Draw SNR placements uniformly instead of evenly spaced");
  cmd->add_option("--config", o.config, "key=value overrides file");
  cmd->add_option("--out", o.out, "Output directory");
}

Scenario build_scenario(const CommonOpts& o) {
  Scenario s = named_scenario(
      o.cmd->count("--scenario") ? o.scenario : std::string("A"), 6);
  if (o.cmd->count("--config")) apply_config_file(s, o.config);
  const std::pair<const char*, const std::string*> keys[] = {
      {"scenario", &o.scenario},   {"sus", &o.sus},
      {"topology", &o.topology},   {"trials", &o.trials},
      {"seed", &o.seed},           {"pf-grid", &o.pf_grid},
      {"alpha-frac", &o.alpha_frac}, {"delta-e-db", &o.delta_e_db},
      {"max-iters", &o.max_iters}, {"weight-mode", &o.weight_mode},
      {"window", &o.window},       {"threads", &o.threads},
      {"snr-lo-db", &o.snr_lo},    {"snr-hi-db", &o.snr_hi},
      {"pr-fail", &o.pr_fail},     {"n-samples", &o.n_samples},
      {"noise-var", &o.noise_var}};
  for (const auto& [key, value] : keys)
    if (o.cmd->count(std::string("--") + key))
      apply_config_line(s, key, *value);
  if (o.cmd->count("--random-snr")) apply_config_line(s, "random-snr", "true");
  s.validate();
  return s;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot open for writing: " + p.string());
  return f;
}

std::string fmt(double v, int prec = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream o;
  o << std::fixed << std::setprecision(prec) << v;
  return o.str();
}

json config_json(const Scenario& s) {
  return {{"scenario", s.name},
          {"channel", s.channel == Channel::awgn ? "awgn" : "rayleigh"},
          {"pr_fail", s.pr_fail},
          {"sus", s.su_count},
          {"snr_lo_db", s.snr_lo_db},
          {"snr_hi_db", s.snr_hi_db},
          {"n_samples", s.n_samples},
          {"noise_var", s.noise_var},
          {"trials", s.trials},
          {"seed", s.seed},
          {"topology", s.topology_name()},
          {"alpha_frac", s.alpha_frac},
          {"delta_e_db", s.delta_e_db},
          {"max_iters", s.max_iters},
          {"weight_mode", to_string(s.weight_mode)},
          {"window", s.window},
          {"random_snr", s.random_snr},
          {"pf_grid", s.effective_pf_grid()}};
}

// The manifest holds everything needed to reproduce a run (thread count is
// deliberately absent: it cannot change any output byte).
void write_manifest(const fs::path& dir, const Scenario& s,
                    const std::string& command,
                    const std::vector<std::string>& outputs, json extra) {
  json j = {{"version", kVersion},
            {"command", command},
            {"config", config_json(s)},
            {"outputs", outputs}};
  j.update(extra);
  auto f = open_out(dir / "manifest.json");
  f << j.dump(2) << '\n';
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Scheme> parse_schemes(const std::string& arg) {
  if (arg == "all") return all_schemes();
  std::vector<Scheme> out;
  for (const std::string& name : split_list(arg))
    out.push_back(parse_scheme(name));
  if (out.empty()) throw ConfigError("empty scheme list");
  return out;
}

std::vector<Rule> parse_rules(const std::string& arg) {
  if (arg == "all")
    return std::vector<Rule>(kAllRules.begin(), kAllRules.end());
  std::vector<Rule> out;
  for (const std::string& name : split_list(arg))
    out.push_back(parse_rule(name));
  if (out.empty()) throw ConfigError("empty rule list");
  return out;
}

int parse_count(const std::string& text, const char* what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size() || v < 1) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + " must be a positive integer, got '" +
                      text + "'");
  }
}

int cmd_roc(const CommonOpts& o, const std::string& schemes_arg) {
  const Scenario s = build_scenario(o);
  const Graph g = Graph::resolve(s.topology_name());
  const std::vector<Scheme> schemes = parse_schemes(schemes_arg);

  const std::vector<RocCurve> curves = estimate_roc(s, g, schemes);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  json scheme_names = json::array();
  for (const RocCurve& c : curves) {
    const std::string name = "roc_" + to_string(c.scheme) + ".csv";
    auto f = open_out(dir / name);
    f << "pf,pd,stderr\n";
    for (const RocPoint& p : c.points)
      f << fmt(p.pf) << ',' << fmt(p.pd) << ',' << fmt(p.se) << '\n';
    outputs.push_back(name);
    scheme_names.push_back(to_string(c.scheme));
    std::cout << "wrote " << (dir / name).string() << '\n';
  }
  json curve_rows = json::array();
  for (const RocCurve& c : curves) {
    json pts = json::array();
    for (std::size_t i = 0; i < c.points.size(); ++i)
      pts.push_back({{"pf", c.points[i].pf},
                     {"pd", c.points[i].pd},
                     {"raw_pd", c.raw_pd[i]},
                     {"stderr", c.points[i].se}});
    curve_rows.push_back(
        {{"scheme", to_string(c.scheme)}, {"points", pts}});
  }
  {
    auto f = open_out(dir / "summary.json");
    f << json{{"curves", curve_rows}}.dump(2) << '\n';
    outputs.push_back("summary.json");
  }
  write_manifest(dir, s, "roc", outputs, {{"schemes", scheme_names}});
  std::cout << "wrote " << (dir / "manifest.json").string() << '\n';
  return 0;
}

// Deterministic per-rule example trajectory for the requested scenario:
// expected energies of one SNR placement, iterated to the spread threshold.
void write_example_traces(const fs::path& dir, const Scenario& s,
                          const Graph& g, const std::vector<Rule>& rules,
                          std::vector<std::string>& outputs) {
  const SensingConfig cfg = s.sensing();
  auto rng = substream(s.seed, "trace-example");
  const Eigen::VectorXd snr_db = scenario_snrs_db(s, rng);
  Eigen::VectorXd x0(s.su_count);
  for (int i = 0; i < s.su_count; ++i) {
    double eta = total_snr(snr_db(i), cfg.n_samples);
    if (s.channel == Channel::rayleigh) eta *= rayleigh_power_gain(rng);
    x0(i) = statistic_moments(eta, cfg).mean;
  }
  Eigen::VectorXd w;
  switch (s.weight_mode) {
    case WeightMode::awgn:
      w = awgn_weights(snr_db, cfg);
      break;
    case WeightMode::rayleigh_oracle:
      w = oracle_weights(snr_db);
      break;
    case WeightMode::rayleigh_est: {
      Eigen::MatrixXd hist(s.window + 1, s.su_count);
      for (int p = 0; p <= s.window; ++p)
        for (int i = 0; i < s.su_count; ++i) {
          double eta = total_snr(snr_db(i), cfg.n_samples);
          if (s.channel == Channel::rayleigh) eta *= rayleigh_power_gain(rng);
          hist(p, i) = sample_statistic(eta, cfg, rng);
        }
      w = estimated_weights(hist, cfg);
      break;
    }
  }
  for (Rule rule : rules) {
    const double alpha = s.alpha_frac * max_step_size(rule, g, w);
    auto link_rng = substream(s.seed, "trace-links-" + to_string(rule));
    const ConsensusTrace trace = run_consensus(
        rule, g, {s.pr_fail}, x0, w, alpha, s.max_iters, s.delta_e_db,
        link_rng);
    const std::string name = "trace_" + to_string(rule) + ".csv";
    auto f = open_out(dir / name);
    f << trace_to_csv(rule, trace);
    outputs.push_back(name);
    std::cout << "wrote " << (dir / name).string() << '\n';
  }
}

int cmd_converge(const CommonOpts& o, const std::string& rules_arg,
                 const std::string& realizations_arg) {
  const Scenario s = build_scenario(o);
  const Graph g = Graph::resolve(s.topology_name());
  const std::vector<Rule> rules = parse_rules(rules_arg);
  const int realizations = parse_count(realizations_arg, "--realizations");

  const std::vector<ConvergenceCell> cells =
      convergence_table(s, g, rules, realizations);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::vector<std::string> outputs{"convergence.csv"};
  {
    auto f = open_out(dir / "convergence.csv");
    f << "scenario,rule,n_su,mean_iters\n";
    for (const ConvergenceCell& c : cells)
      f << c.scenario << ',' << to_string(c.rule) << ',' << c.su_count << ','
        << c.display << '\n';
    std::cout << "wrote " << (dir / "convergence.csv").string() << '\n';
  }
  write_example_traces(dir, s, g, rules, outputs);

  json cell_rows = json::array();
  for (const ConvergenceCell& c : cells) {
    cell_rows.push_back({{"scenario", c.scenario},
                         {"rule", to_string(c.rule)},
                         {"n_su", c.su_count},
                         {"realizations", c.realizations},
                         {"mean_iters", c.mean_iters},
                         {"unconverged_frac", c.unconverged},
                         {"display", c.display}});
    std::cout << s.name << "  " << to_string(c.rule) << "  n=" << c.su_count
              << "  mean=" << c.display
              << "  unconverged=" << fmt(c.unconverged, 3) << '\n';
  }
  {
    auto f = open_out(dir / "summary.json");
    f << json{{"cells", cell_rows}}.dump(2) << '\n';
    outputs.push_back("summary.json");
  }
  write_manifest(dir, s, "converge", outputs,
                 {{"realizations", realizations},
                  {"rules", [&] {
                     json r = json::array();
                     for (Rule rule : rules) r.push_back(to_string(rule));
                     return r;
                   }()}});
  return 0;
}

int cmd_slem(const CommonOpts& o) {
  const Scenario s = build_scenario(o);
  const Graph g = Graph::resolve(s.topology_name());
  const std::vector<SlemRow> rows = slem_report(s, g);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::vector<std::string> outputs{"slem.csv", "summary.json"};
  {
    auto f = open_out(dir / "slem.csv");
    f << "rule,rho2,t_small,t_large\n";
    for (const SlemRow& r : rows)
      f << to_string(r.rule) << ',' << fmt(r.rho2) << ',' << fmt(r.t_small)
        << ',' << fmt(r.t_large) << '\n';
    std::cout << "wrote " << (dir / "slem.csv").string() << '\n';
  }
  json row_json = json::array();
  for (const SlemRow& r : rows) {
    row_json.push_back({{"rule", to_string(r.rule)},
                        {"alpha", r.alpha},
                        {"rho2", r.rho2},
                        {"rho2_gram", r.rho2_gram},
                        {"t_small", r.t_small},
                        {"t_large", r.t_large}});
    std::cout << to_string(r.rule) << "  alpha=" << fmt(r.alpha, 4)
              << "  rho2=" << fmt(r.rho2) << "  t_small=" << fmt(r.t_small, 2)
              << "  t_large=" << fmt(r.t_large, 2) << '\n';
  }
  {
    auto f = open_out(dir / "summary.json");
    f << json{{"rows", row_json}}.dump(2) << '\n';
  }
  write_manifest(dir, s, "slem", outputs, json::object());

  // Informational only, so the file outputs stay bit-identical across runs.
  std::cout << "\nper-iteration cost on ring networks (microseconds)\n";
  std::cout << std::left << std::setw(8) << "rule" << std::setw(10) << "class";
  const std::vector<ComplexityRow> complexity = complexity_report();
  for (const auto& [n, us] : complexity.front().micros)
    std::cout << std::setw(10) << ("n=" + std::to_string(n));
  std::cout << '\n';
  for (const ComplexityRow& r : complexity) {
    std::cout << std::left << std::setw(8) << to_string(r.rule) << std::setw(10)
              << r.order;
    for (const auto& [n, us] : r.micros) std::cout << std::setw(10) << fmt(us, 3);
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consensus-based cooperative spectrum sensing simulator"};
  app.require_subcommand(1);

  CommonOpts roc_opts, conv_opts, slem_opts;
  std::string schemes_arg = "all", rules_arg = "all", realizations_arg = "500";

  CLI::App* roc = app.add_subcommand(
      "roc", "Estimate ROC curves for the fusion schemes");
  add_common(roc, roc_opts);
  roc->add_option("--schemes", schemes_arg,
                  "'all' or comma list: hard_or,hard_and,hard_majority,"
                  "soft_egc,soft_mrc,ac,wac,wac_ae,iwac");

  CLI::App* converge = app.add_subcommand(
      "converge", "Iterations-to-consensus table over channel realizations");
  add_common(converge, conv_opts);
  converge->add_option("--rules", rules_arg,
                       "'all' or comma list: ac,wac,wac_ae,iwac");
  converge->add_option("--realizations", realizations_arg,
                       "Channel realizations per cell");

  CLI::App* slem = app.add_subcommand(
      "slem", "Spectral mixing-time report for the averaging rules");
  add_common(slem, slem_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (roc->parsed()) return cmd_roc(roc_opts, schemes_arg);
    if (converge->parsed())
      return cmd_converge(conv_opts, rules_arg, realizations_arg);
    return cmd_slem(slem_opts);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const GraphError& e) {
    std::cerr << "topology error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
