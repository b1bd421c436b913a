#pragma once

#include <Eigen/Dense>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dcss {

// Raised for malformed topology files or invalid graph construction.
struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Undirected simple graph over nodes 0..n-1. Immutable after construction;
// safe to share across threads.
class Graph {
 public:
  // Validates indices, rejects self-loops and duplicates. Connectivity is
  // required unless `allow_disconnected` (used for per-step link sampling,
  // where momentary disconnection is legitimate).
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges,
                          bool allow_disconnected = false);

  // Edge-list text format: first non-comment line is the node count, each
  // following line one "i j" pair (0-based, i < j). '#' starts a comment.
  static Graph load_file(const std::string& path);

  // Shipped networks: "topo6", "topo10", "topo20" (compiled in, so lookup
  // does not depend on the working directory). Any other string is treated
  // as a file path.
  static Graph resolve(const std::string& name_or_path);
  static bool is_builtin(const std::string& name);

  int size() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }
  int max_degree() const;
  bool connected() const;

  Eigen::MatrixXd adjacency() const;

  // Degree matrix minus adjacency: rows sum to zero, off-diagonals are -1.
  Eigen::MatrixXd laplacian() const;

  // Neighbor-weighted variant: diagonal entry i is the sum of the weights of
  // i's neighbors, off-diagonal (i,j) is -w_j. Asymmetric unless w is uniform.
  Eigen::MatrixXd weighted_laplacian(const Eigen::VectorXd& w) const;

  // Each edge retained independently with probability 1 - pr_fail.
  Graph sample_links(double pr_fail, std::mt19937_64& rng) const;

  // Entrywise expectation of the Laplacian under independent link failures:
  // (1 - pr_fail) * laplacian().
  Eigen::MatrixXd expected_laplacian(double pr_fail) const;

 private:
  Graph() = default;
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace dcss
