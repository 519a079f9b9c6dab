#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "logpart/graph.hpp"

namespace logpart {

struct SampleBatch {
  std::vector<SpanningTree> trees;
  std::vector<std::int64_t> edge_counts;  // trees containing each edge
  std::vector<double> empirical_marginals;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
};

/// One uniform spanning tree by the Aldous-Broder walk. Throws
/// invariant_violation when the walk exceeds `step_limit` steps.
SpanningTree aldous_broder(const Graph& g, std::mt19937_64& rng, std::uint64_t step_limit);

/// n independent uniform spanning trees; sample i uses stream_rng(seed, i), so
/// the batch does not depend on `threads`.
SampleBatch sample_ust(const Graph& g, std::int64_t n, std::uint64_t seed, int threads = 1);

/// `tree <edge indices>` per line.
std::string format_sample_batch(const SampleBatch& batch);

struct ResistanceProfile {
  std::vector<double> u;  // effective resistance per edge, unit conductances
  double kappa_u = 1.0;   // min_e u_e
};

enum class LaplacianSolver { automatic, dense, iterative };

/// Grounded-Laplacian solve per edge. `automatic` uses dense Cholesky up to
/// 2000 vertices and Jacobi-preconditioned conjugate gradient above.
ResistanceProfile effective_resistance(const Graph& g, int threads = 1,
                                       LaplacianSolver solver = LaplacianSolver::automatic);

struct ResistanceBounds {
  double degree_bound = 1.0;          // 2/(d+1)
  std::optional<double> girth_bound;  // 1/(1+|E|/(g-1)^2) when girth > 3
};

ResistanceBounds resistance_bounds_structural(const Graph& g);

/// Smallest n with (2|E|+4) exp(-2 n kappa_u^2 eps^2) <= delta.
std::int64_t sample_size_for(double epsilon, double delta, const Graph& g, double kappa_u_lower);

}  // namespace logpart
