#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "logpart/graph.hpp"
#include "logpart/model.hpp"

namespace logpart {

/// Work limits for the exponential-time routines.
struct Caps {
  std::uint64_t configurations = std::uint64_t{1} << 24;  // q^N for brute force
  int subset_nodes = 22;                                  // vertex-subset enumeration
  std::uint64_t spanning_trees = 1'000'000;               // explicit tree enumeration
  int block_size = 20;                                    // per-block brute force
  int edge_subset = 20;                                   // edge-subset enumeration
};

enum class PhiMethod { brute_force, tree_sum_product, component_product };

const char* to_string(PhiMethod method) noexcept;

struct LogPartitionValue {
  double phi = 0.0;  // natural log of the partition function
  PhiMethod method = PhiMethod::brute_force;
};

/// Streaming log-sum-exp accumulator.
class LogSumExp {
 public:
  void add(double x) noexcept;
  double value() const noexcept;

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_sum_ = 0.0;
};

/// Exact log-partition function by enumerating all q^N configurations.
LogPartitionValue phi_brute_force(const PairwiseModel& m, const Caps& caps = {});
LogPartitionValue phi_brute_force(const PairwiseModel& m, std::span<const double> theta, const Caps& caps = {});

/// Exact log-partition function when the edges with non-zero weight form a
/// forest. With a support tree the weights outside the tree are dropped first.
LogPartitionValue phi_tree(const PairwiseModel& m);
LogPartitionValue phi_tree(const PairwiseModel& m, const SpanningTree& support);
LogPartitionValue phi_tree(const PairwiseModel& m, std::span<const double> theta);

using VertexPartition = std::vector<std::vector<Vertex>>;

/// Sum of per-block brute-force values after dropping every edge that
/// crosses between blocks.
LogPartitionValue phi_components(const PairwiseModel& m, const VertexPartition& blocks, const Caps& caps = {});
LogPartitionValue phi_components(const PairwiseModel& m, std::span<const double> theta, const VertexPartition& blocks,
                                 const Caps& caps = {});

/// Checks that `blocks` partitions {0..N-1}; throws otherwise.
void validate_partition(const Graph& g, const VertexPartition& blocks);

/// Number of spanning trees by the matrix-tree theorem (floating point).
double kirchhoff_tree_count(const Graph& g);

struct TreeEnumeration {
  std::vector<SpanningTree> trees;
  std::uint64_t count = 0;
};

/// All spanning trees, in a fixed include-before-exclude order over edge indices.
TreeEnumeration enumerate_spanning_trees(const Graph& g, const Caps& caps = {});

struct WeightedTree {
  SpanningTree tree;
  double total_weight = 0.0;
};

/// Kruskal on decreasing weight; ties go to the smaller edge index.
WeightedTree max_weight_spanning_tree(const Graph& g, std::span<const double> w);

}  // namespace logpart
