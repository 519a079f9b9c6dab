#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace logpart {

using Vertex = int;
using EdgeId = int;

/// Undirected edge with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  auto operator<=>(const Edge&) const = default;
};

struct Incidence {
  Vertex neighbor;
  EdgeId edge;
};

/// Simple undirected graph on vertices 0..N-1.
///
/// Edges are stored in lexicographic order of (min, max) endpoints so that an
/// edge index means the same thing for every graph with the same edge set.
/// Self-loops and parallel edges are rejected at construction.
class Graph {
 public:
  Graph() = default;
  Graph(int node_count, std::vector<std::pair<Vertex, Vertex>> edges);

  int node_count() const noexcept { return node_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }

  std::span<const Incidence> incident(Vertex v) const;
  int degree(Vertex v) const { return static_cast<int>(incident(v).size()); }
  int max_degree() const noexcept;

  bool connected() const noexcept { return connected_; }
  void require_connected(std::string_view operation) const;

  std::optional<EdgeId> find_edge(Vertex a, Vertex b) const;

  bool operator==(const Graph& other) const noexcept {
    return node_count_ == other.node_count_ && edges_ == other.edges_;
  }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidences_;
  bool connected_ = false;
};

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(int n);

  int find(int x);
  bool unite(int a, int b);
  int components() const noexcept { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int components_;
};

/// Union-find without path compression whose unions can be undone in LIFO
/// order. Used by the backtracking enumerators.
class UndoableDisjointSets {
 public:
  explicit UndoableDisjointSets(int n);

  int find(int x) const;
  bool unite(int a, int b);
  std::size_t checkpoint() const noexcept { return history_.size(); }
  void rollback(std::size_t mark);
  int components() const noexcept { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> history_;
  int components_;
};

/// A spanning tree of a host graph, stored as sorted edge indices.
class SpanningTree {
 public:
  SpanningTree() = default;
  SpanningTree(const Graph& g, std::vector<EdgeId> edges);

  const std::vector<EdgeId>& edges() const noexcept { return edges_; }
  bool contains(EdgeId e) const;

  auto operator<=>(const SpanningTree&) const = default;

 private:
  std::vector<EdgeId> edges_;
};

/// Per-edge non-negative weights. Dual vectors additionally sum to one.
using WeightVector = std::vector<double>;

void validate_weights(const Graph& g, std::span<const double> w);
void validate_dual_weights(const Graph& g, std::span<const double> w, double tol = 1e-12);

/// Vertex set given as a bitmask; only meaningful for N <= 64.
using VertexMask = std::uint64_t;

std::vector<Vertex> mask_to_vertices(VertexMask mask);
VertexMask vertices_to_mask(std::span<const Vertex> vertices);

/// Edges with both endpoints in `subset`.
std::vector<EdgeId> induced_edges(const Graph& g, std::span<const Vertex> subset);

/// Length of the shortest cycle, or nullopt for a forest.
std::optional<int> girth(const Graph& g);

}  // namespace logpart
