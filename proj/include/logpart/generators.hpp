#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "logpart/graph.hpp"
#include "logpart/model.hpp"

namespace logpart {

enum class GraphFamily { tree, path, star, cycle, complete, grid, random_regular, erdos_renyi, petersen };

std::optional<GraphFamily> parse_family(std::string_view name);
std::string_view family_name(GraphFamily family);

struct FamilyParams {
  int n = 0;         // vertex count (tree, path, star, cycle, complete, random families)
  int width = 0;     // grid
  int height = 0;    // grid
  int degree = 0;    // random_regular
  double p = 0.0;    // erdos_renyi edge probability
  int max_retries = 1000;
};

/// Deterministic in (family, params, seed). Random families are resampled
/// until connected, up to `max_retries` attempts.
Graph generate_graph(GraphFamily family, const FamilyParams& params, std::uint64_t seed = 0);

/// Grid vertex (row, col) has id row * width + col.
inline Vertex grid_vertex(int width, int row, int col) { return row * width + col; }

struct ModelParams {
  int alphabet = 2;
  double theta_min = 0.0;
  double theta_max = 1.0;
  double potential_max = 1.0;
};

/// Random model on `g`: theta uniform in [theta_min, theta_max], each
/// potential entry uniform in [0, potential_max].
PairwiseModel random_model(const Graph& g, const ModelParams& params, std::uint64_t seed);

/// Model with a single table shared by all edges and constant weight.
PairwiseModel uniform_model(const Graph& g, int alphabet, double theta, const std::vector<double>& table);

}  // namespace logpart
