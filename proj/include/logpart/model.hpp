#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logpart/graph.hpp"

namespace logpart {

/// Pairwise model with non-negative edge weights theta and non-negative edge
/// potential tables. The table of edge (u, v), u < v, is stored row-major
/// with the row indexed by x_u.
class PairwiseModel {
 public:
  PairwiseModel(Graph graph, int alphabet_size, std::vector<double> theta,
                std::vector<std::vector<double>> potentials);

  const Graph& graph() const noexcept { return graph_; }
  int alphabet_size() const noexcept { return q_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<std::vector<double>>& potentials() const noexcept { return potentials_; }

  double potential(EdgeId e, int x_u, int x_v) const {
    return potentials_[static_cast<std::size_t>(e)][static_cast<std::size_t>(x_u * q_ + x_v)];
  }

  /// Same graph and potentials with a different weight vector.
  PairwiseModel with_theta(std::vector<double> theta) const;

  bool operator==(const PairwiseModel&) const = default;

 private:
  Graph graph_;
  int q_;
  std::vector<double> theta_;
  std::vector<std::vector<double>> potentials_;
};

/// Parses the `gmodel 1` text format. Errors carry the offending line.
PairwiseModel parse_model(std::string_view text);

/// Writes `gmodel 1` text with shortest round-trip formatting of reals.
std::string serialize_model(const PairwiseModel& m);

/// Parses `ggraph 1`; a `gmodel 1` document is also accepted and its graph returned.
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& g);

std::string read_text_file(const std::string& path);

/// Shortest representation that parses back to the same double.
std::string format_real(double x);

/// Potential-table helpers used by tests, generators and the CLI.
std::vector<double> equality_table(int q);
std::vector<double> disagreement_table(int q);

}  // namespace logpart
