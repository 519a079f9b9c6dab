#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logpart/exact.hpp"
#include "logpart/kappa.hpp"
#include "logpart/model.hpp"

namespace logpart {

enum class EstimateMethod { trw_prime, uniform_sampled, partition };

const char* to_string(EstimateMethod method) noexcept;

struct EstimateReport {
  double L = 0.0;
  double U = 0.0;
  double phi_hat = 0.0;
  double kappa_used = 1.0;  // least coverage of a weighted edge under the distribution used
  double ratio_lo = 1.0;    // sqrt(kappa_used)
  double ratio_hi = 1.0;    // 1 / sqrt(kappa_used)
  EstimateMethod method = EstimateMethod::trw_prime;
  std::optional<std::int64_t> n_samples;
  std::optional<std::uint64_t> seed;
};

/// Fills phi_hat and the ratio interval from L, U and kappa_used.
EstimateReport make_report(double L, double U, double kappa_used, EstimateMethod method);

/// `L`, `U`, `phi_hat`, `kappa`, `ratio_lo`, `ratio_hi`, `method` lines, then `n` and `seed` when present.
std::string serialize_report(const EstimateReport& report);

struct LowerUpper {
  double L = 0.0;
  double U = 0.0;
};

/// L = E_T Phi(theta restricted to T), U = E_T Phi(theta_e / rho_e on T).
/// Throws edge_uncovered when a weighted edge has zero marginal.
LowerUpper lower_upper(const PairwiseModel& m, const TreeDistribution& rho, int threads = 1);

/// min over edges with theta_e > 0 of coverage[e]; 1 when no edge is weighted.
double weighted_coverage(std::span<const double> theta, std::span<const double> coverage);

/// Remembers one optimal tree distribution per graph.
class CoveringCache {
 public:
  const TreeDistribution* find(const Graph& g) const;
  const TreeDistribution& insert(const Graph& g, TreeDistribution rho);

 private:
  std::vector<std::pair<Graph, TreeDistribution>> entries_;
};

struct TrwOptions {
  double tol = 1e-6;                       // MW gap when the exact solver is out of reach
  std::int64_t max_rounds = std::int64_t{1} << 22;
  Caps caps;
  int threads = 1;
};

/// Balanced covering of g: exact when N is within the subset cap, MW otherwise.
TreeDistribution optimal_covering(const Graph& g, const TrwOptions& options);

EstimateReport estimate_trw_prime(const PairwiseModel& m, const TrwOptions& options = {},
                                  CoveringCache* cache = nullptr);

/// Sampled uniform-tree variant. n comes from sample_size_for with the exact
/// kappa_u; a weighted edge missed by every sample doubles n, at most 3 times.
EstimateReport estimate_uniform_sampled(const PairwiseModel& m, double epsilon, double delta, std::uint64_t seed,
                                        int threads = 1);

/// Empirical distribution of a sample batch (duplicates merged).
TreeDistribution empirical_distribution(const Graph& g, const std::vector<SpanningTree>& trees);

struct WeightedPartition {
  VertexPartition blocks;  // canonical: vertices sorted, blocks sorted
  double probability = 0.0;
};

struct PartitionDistribution {
  std::vector<WeightedPartition> support;
  int k = 0;
  std::vector<double> edge_coverage;
  double epsilon = 0.0;  // 1 - min_e edge_coverage
};

/// Canonicalizes, merges duplicates and computes coverage. Throws if a block
/// exceeds k, a partition is invalid or probabilities do not sum to one.
PartitionDistribution make_partition_distribution(const Graph& g, std::vector<WeightedPartition> support, int k);

/// Uniform mixture over the b*b offsets (sx, sy) of a b-by-b block tiling.
/// Along a side longer than b, vertex r lies in tile (r + s) / b; a side of
/// length <= b is a single tile. Graph vertices follow grid_vertex.
PartitionDistribution shifted_grid_partitions(int width, int height, int b);

/// Text form: `partition <prob>` followed by its `block <vertices>` lines.
PartitionDistribution parse_partition_distribution(const Graph& g, std::string_view text, int k);
std::string format_partition_distribution(const PartitionDistribution& pd);

EstimateReport estimate_partition(const PairwiseModel& m, const PartitionDistribution& pd, const Caps& caps = {},
                                  int threads = 1);

struct MaxcutBracket {
  double lower = 0.0;
  double upper = 0.0;
  double beta = 0.0;
  EstimateReport report;
};

/// Certified bracket on the maximum cut from the TRW' estimate of the q=2
/// disagreement model with theta_e = beta. beta <= 0 selects 10 N ln 2.
MaxcutBracket maxcut_bracket(const Graph& g, double beta = 0.0, const TrwOptions& options = {});

/// Maximum cut by enumerating all 2^(N-1) cuts.
int maxcut_brute_force(const Graph& g);

}  // namespace logpart
