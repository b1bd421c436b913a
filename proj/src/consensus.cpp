#include "dcss/consensus.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

namespace dcss {

std::string to_string(Rule r) {
  switch (r) {
    case Rule::ac: return "ac";
    case Rule::wac: return "wac";
    case Rule::wac_ae: return "wac_ae";
    case Rule::iwac: return "iwac";
  }
  return "?";
}

Rule parse_rule(const std::string& s) {
  for (Rule r : kAllRules)
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown rule: " + s);
}

Eigen::VectorXd awgn_weights(const Eigen::VectorXd& snr_db,
                             const SensingConfig& cfg) {
  Eigen::VectorXd w(snr_db.size());
  for (int i = 0; i < w.size(); ++i)
    w(i) = total_snr(snr_db(i), cfg.n_samples) / cfg.noise_var;
  return w.cwiseMax(kWeightFloor);
}

Eigen::VectorXd oracle_weights(const Eigen::VectorXd& snr_db) {
  Eigen::VectorXd w(snr_db.size());
  for (int i = 0; i < w.size(); ++i) w(i) = snr_db_to_linear(snr_db(i));
  return w.cwiseMax(kWeightFloor);
}

Eigen::VectorXd estimated_weights(const Eigen::MatrixXd& history,
                                  const SensingConfig& cfg) {
  const auto rows = history.rows();
  if (rows < 2)
    throw std::invalid_argument(
        "estimated_weights: need a window of at least two statistics");
  const double ell = static_cast<double>(rows - 1);
  const double baseline = 2.0 * cfg.n_samples * cfg.noise_var;
  Eigen::VectorXd sums = history.colwise().sum().transpose();
  Eigen::VectorXd w =
      (sums.array() - static_cast<double>(rows) * baseline) / (2.0 * ell);
  return w.cwiseMax(kWeightFloor);
}

double max_step_size(Rule rule, const Graph& g, const Eigen::VectorXd& w) {
  if (g.edges().empty()) return std::numeric_limits<double>::infinity();
  // Each row of P stays nonnegative while alpha * (row load) <= 1; the bound
  // is the reciprocal of the worst row load. For the inverse-weight rules the
  // load is divided by the node's own weight, so weights below one (possible
  // through the estimator floor) tighten the bound beyond the classical
  // 1/max-degree and 1/max-neighbor-sum expressions.
  double worst = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    double load = 0.0;
    switch (rule) {
      case Rule::ac:
        load = g.degree(i);
        break;
      case Rule::wac:
        load = std::max(g.degree(i) / w(i), static_cast<double>(g.max_degree()));
        break;
      case Rule::wac_ae:
      case Rule::iwac: {
        double s = 0.0;
        for (int j : g.neighbors(i)) s += w(j);
        load = rule == Rule::iwac ? std::max(s / w(i), s) : s;
        break;
      }
    }
    worst = std::max(worst, load);
  }
  return 1.0 / worst;
}

Eigen::MatrixXd perron_matrix(Rule rule, const Graph& g,
                              const Eigen::VectorXd& w, double alpha) {
  const double bound = max_step_size(rule, g, w);
  if (!(alpha > 0.0) || alpha >= bound)
    throw std::invalid_argument("step size " + std::to_string(alpha) +
                                " outside (0, " + std::to_string(bound) + ")");
  const int n = g.size();
  Eigen::MatrixXd l;
  switch (rule) {
    case Rule::ac:
    case Rule::wac:
      l = g.laplacian();
      break;
    case Rule::wac_ae:
    case Rule::iwac:
      l = g.weighted_laplacian(w);
      break;
  }
  if (rule == Rule::wac || rule == Rule::iwac)
    l = w.cwiseInverse().asDiagonal() * l;
  return Eigen::MatrixXd::Identity(n, n) - alpha * l;
}

Eigen::VectorXd stationary_weights(const Eigen::MatrixXd& P) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(P.transpose());
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < P.rows(); ++i) {
    const double dist = std::abs(es.eigenvalues()(i) - std::complex<double>(1, 0));
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  const double total = v.sum();
  if (std::abs(total) < 1e-300)
    throw NumericError("degenerate stationary vector");
  return v / total;
}

double delta_e_db(const Eigen::VectorXd& x) {
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  if (!(lo > 0.0) || !std::isfinite(hi))
    throw NumericError(
        "state left the positive orthant; step size is too large for this "
        "topology/weight combination");
  return 10.0 * std::log10(hi / lo);
}

namespace {

// Cheap edge-wise update for the unit-Laplacian rule; the weighted rules go
// through an explicit Perron matrix (dense multiply) instead.
void ac_step(const Graph& g, double alpha, const Eigen::VectorXd& x,
             Eigen::VectorXd& out) {
  out = x;
  for (auto [i, j] : g.edges()) {
    const double diff = x(j) - x(i);
    out(i) += alpha * diff;
    out(j) -= alpha * diff;
  }
}

}  // namespace

ConsensusTrace run_consensus(Rule rule, const Graph& g, LinkModel links,
                             Eigen::VectorXd x0, const Eigen::VectorXd& w,
                             double alpha, int max_iters,
                             double spread_threshold_db,
                             std::mt19937_64& rng) {
  if (x0.minCoeff() <= 0.0)
    throw NumericError("initial state must be strictly positive");
  // Validate alpha against the base graph; dropping links only loosens the
  // per-step bound, so the same alpha stays valid for every sampled subgraph.
  if (!g.edges().empty()) {
    const double bound = max_step_size(rule, g, w);
    if (!(alpha > 0.0) || alpha >= bound)
      throw std::invalid_argument("step size " + std::to_string(alpha) +
                                  " outside (0, " + std::to_string(bound) +
                                  ")");
  }
  const bool dynamic = links.pr_fail > 0.0;
  Eigen::MatrixXd P;
  if (rule != Rule::ac && !dynamic && !g.edges().empty())
    P = perron_matrix(rule, g, w, alpha);

  ConsensusTrace trace;
  trace.states.push_back(x0);
  trace.spread_db.push_back(delta_e_db(x0));
  if (trace.spread_db.back() <= spread_threshold_db) trace.converged_at = 0;

  Eigen::VectorXd x = std::move(x0), next(x.size());
  for (int k = 1; k <= max_iters && !trace.converged_at; ++k) {
    if (g.edges().empty()) {
      next = x;  // no links: the state is already the (trivial) consensus
    } else if (dynamic) {
      const Graph step_graph = g.sample_links(links.pr_fail, rng);
      if (rule == Rule::ac) {
        ac_step(step_graph, alpha, x, next);
      } else if (step_graph.edges().empty()) {
        next = x;
      } else {
        next = perron_matrix(rule, step_graph, w, alpha) * x;
      }
    } else if (rule == Rule::ac) {
      ac_step(g, alpha, x, next);
    } else {
      next = P * x;
    }
    x = next;
    trace.states.push_back(x);
    trace.spread_db.push_back(delta_e_db(x));
    if (trace.spread_db.back() <= spread_threshold_db) trace.converged_at = k;
  }
  return trace;
}

bool final_decision(const ConsensusTrace& trace, double threshold) {
  return trace.final_state().mean() > threshold;
}

std::string trace_to_csv(Rule rule, const ConsensusTrace& trace) {
  std::ostringstream out;
  out.precision(10);
  out << "iteration,su_index,state_db\n";
  for (std::size_t k = 0; k < trace.states.size(); ++k)
    for (int i = 0; i < trace.states[k].size(); ++i)
      out << k << ',' << i << ',' << 10.0 * std::log10(trace.states[k](i))
          << '\n';
  out << "# rule=" << to_string(rule) << " iters_to_converge="
      << (trace.converged_at ? std::to_string(*trace.converged_at) : "none")
      << '\n';
  return out.str();
}

}  // namespace dcss
