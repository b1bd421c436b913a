#include "dcss/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace dcss {

namespace {

// Shipped reference networks. The same edge lists are also installed under
// data/ for use as file-format examples.
const std::vector<std::pair<int, int>>& builtin_edges(const std::string& name,
                                                      int& n) {
  static const std::vector<std::pair<int, int>> six = {
      {0, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}};
  static const std::vector<std::pair<int, int>> ten = {
      {0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5},
      {4, 5}, {5, 6}, {5, 7}, {5, 8}, {7, 9}, {8, 9}};
  // 20 nodes: caterpillar with backbone 0-1-2-3-4 and three leaves per
  // backbone node (a documented stand-in for a deployment published only as
  // a drawing; every experiment accepts a substitute file).
  static const std::vector<std::pair<int, int>> twenty = {
      {0, 1},  {1, 2},  {2, 3},  {3, 4},  {0, 5},  {0, 6},  {0, 15},
      {1, 7},  {1, 8},  {1, 16}, {2, 9},  {2, 10}, {2, 17}, {3, 11},
      {3, 12}, {3, 18}, {4, 13}, {4, 14}, {4, 19}};
  static const std::vector<std::pair<int, int>> none;
  if (name == "topo6") {
    n = 6;
    return six;
  }
  if (name == "topo10") {
    n = 10;
    return ten;
  }
  if (name == "topo20") {
    n = 20;
    return twenty;
  }
  n = 0;
  return none;
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges,
                        bool allow_disconnected) {
  if (n < 1) throw GraphError("node count must be at least 1");
  std::set<std::pair<int, int>> seen;
  for (auto& [i, j] : edges) {
    if (i > j) std::swap(i, j);
    if (i == j) throw GraphError("self-loop on node " + std::to_string(i));
    if (i < 0 || j >= n)
      throw GraphError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of range for " + std::to_string(n) + " nodes");
    if (!seen.insert({i, j}).second)
      throw GraphError("duplicate edge (" + std::to_string(i) + "," +
                       std::to_string(j) + ")");
  }
  std::sort(edges.begin(), edges.end());
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.adj_.assign(n, {});
  for (auto [i, j] : g.edges_) {
    g.adj_[i].push_back(j);
    g.adj_[j].push_back(i);
  }
  if (!allow_disconnected && !g.connected())
    throw GraphError("graph is not connected");
  return g;
}

Graph Graph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open topology file: " + path);
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    if (n < 0) {
      if (ls >> n) {
        int extra;
        if (ls >> extra)
          throw GraphError(path + ":" + std::to_string(lineno) +
                           ": expected a lone node count");
        if (n < 1)
          throw GraphError(path + ": node count must be at least 1");
      } else if (!line.empty() && line.find_first_not_of(" \t\r") !=
                                      std::string::npos) {
        throw GraphError(path + ":" + std::to_string(lineno) +
                         ": expected node count");
      }
      continue;
    }
    int i, j;
    if (ls >> i) {
      if (!(ls >> j))
        throw GraphError(path + ":" + std::to_string(lineno) +
                         ": expected 'i j' edge pair");
      if (i >= j)
        throw GraphError(path + ":" + std::to_string(lineno) +
                         ": edges must satisfy i < j");
      edges.emplace_back(i, j);
    }
  }
  if (n < 0) throw GraphError(path + ": missing node count");
  try {
    return from_edges(n, std::move(edges));
  } catch (const GraphError& e) {
    throw GraphError(path + ": " + e.what());
  }
}

bool Graph::is_builtin(const std::string& name) {
  int n = 0;
  return !builtin_edges(name, n).empty();
}

Graph Graph::resolve(const std::string& name_or_path) {
  int n = 0;
  const auto& edges = builtin_edges(name_or_path, n);
  if (!edges.empty()) return from_edges(n, edges);
  return load_file(name_or_path);
}

int Graph::max_degree() const {
  int m = 0;
  for (int i = 0; i < n_; ++i) m = std::max(m, degree(i));
  return m;
}

bool Graph::connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(n_, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj_[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
  }
  return count == n_;
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (auto [i, j] : edges_) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

Eigen::MatrixXd Graph::laplacian() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
  for (auto [i, j] : edges_) {
    l(i, i) += 1.0;
    l(j, j) += 1.0;
    l(i, j) -= 1.0;
    l(j, i) -= 1.0;
  }
  return l;
}

Eigen::MatrixXd Graph::weighted_laplacian(const Eigen::VectorXd& w) const {
  if (w.size() != n_)
    throw GraphError("weight vector size does not match node count");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
  for (auto [i, j] : edges_) {
    l(i, i) += w(j);
    l(j, j) += w(i);
    l(i, j) -= w(j);
    l(j, i) -= w(i);
  }
  return l;
}

Graph Graph::sample_links(double pr_fail, std::mt19937_64& rng) const {
  if (pr_fail <= 0.0) return *this;
  std::vector<std::pair<int, int>> kept;
  kept.reserve(edges_.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto e : edges_)
    if (u(rng) >= pr_fail) kept.push_back(e);
  return from_edges(n_, std::move(kept), /*allow_disconnected=*/true);
}

Eigen::MatrixXd Graph::expected_laplacian(double pr_fail) const {
  return (1.0 - pr_fail) * laplacian();
}

}  // namespace dcss
