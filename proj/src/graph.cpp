#include "logpart/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "logpart/error.hpp"

namespace logpart {

Graph::Graph(int node_count, std::vector<std::pair<Vertex, Vertex>> edges) : node_count_(node_count) {
  if (node_count < 1) throw Error(Errc::invalid_argument, "graph needs at least one vertex");
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count)
      throw Error(Errc::invalid_argument,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    if (a == b) throw Error(Errc::self_loop, "self-loop at vertex " + std::to_string(a));
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end())
    throw Error(Errc::duplicate_edge,
                "edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ") repeated");

  std::vector<std::size_t> degree(static_cast<std::size_t>(node_count), 0);
  for (const Edge& e : edges_) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
  incidences_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId i = 0; i < edge_count(); ++i) {
    const Edge& e = edges_[static_cast<std::size_t>(i)];
    incidences_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, i};
    incidences_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, i};
  }

  DisjointSets dsu(node_count);
  for (const Edge& e : edges_) dsu.unite(e.u, e.v);
  connected_ = dsu.components() == 1;
}

std::span<const Incidence> Graph::incident(Vertex v) const {
  auto i = static_cast<std::size_t>(v);
  return {incidences_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

int Graph::max_degree() const noexcept {
  int best = 0;
  for (Vertex v = 0; v < node_count_; ++v) best = std::max(best, degree(v));
  return best;
}

void Graph::require_connected(std::string_view operation) const {
  if (!connected_)
    throw Error(Errc::disconnected_graph, std::string(operation) + " requires a connected graph");
}

std::optional<EdgeId> Graph::find_edge(Vertex a, Vertex b) const {
  Edge key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<EdgeId>(it - edges_.begin());
}

DisjointSets::DisjointSets(int n)
    : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1), components_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int DisjointSets::find(int x) {
  while (parent_[static_cast<std::size_t>(x)] != x) {
    auto& p = parent_[static_cast<std::size_t>(x)];
    p = parent_[static_cast<std::size_t>(p)];
    x = p;
  }
  return x;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  --components_;
  return true;
}

UndoableDisjointSets::UndoableDisjointSets(int n)
    : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1), components_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UndoableDisjointSets::find(int x) const {
  while (parent_[static_cast<std::size_t>(x)] != x) x = parent_[static_cast<std::size_t>(x)];
  return x;
}

bool UndoableDisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  history_.push_back(b);
  --components_;
  return true;
}

void UndoableDisjointSets::rollback(std::size_t mark) {
  while (history_.size() > mark) {
    int b = history_.back();
    history_.pop_back();
    int a = parent_[static_cast<std::size_t>(b)];
    size_[static_cast<std::size_t>(a)] -= size_[static_cast<std::size_t>(b)];
    parent_[static_cast<std::size_t>(b)] = b;
    ++components_;
  }
}

SpanningTree::SpanningTree(const Graph& g, std::vector<EdgeId> edges) : edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  if (static_cast<int>(edges_.size()) != g.node_count() - 1)
    throw Error(Errc::invalid_argument, "spanning tree needs exactly N-1 edges");
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw Error(Errc::invalid_argument, "spanning tree repeats an edge");
  DisjointSets dsu(g.node_count());
  for (EdgeId e : edges_) {
    if (e < 0 || e >= g.edge_count()) throw Error(Errc::invalid_argument, "edge index out of range");
    if (!dsu.unite(g.edge(e).u, g.edge(e).v))
      throw Error(Errc::cycle_in_support, "edge set of spanning tree contains a cycle");
  }
}

bool SpanningTree::contains(EdgeId e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

void validate_weights(const Graph& g, std::span<const double> w) {
  if (static_cast<int>(w.size()) != g.edge_count())
    throw Error(Errc::invalid_argument, "weight vector length differs from edge count");
  for (double x : w)
    if (!std::isfinite(x) || x < 0.0) throw Error(Errc::negative_weight, "weights must be finite and >= 0");
}

void validate_dual_weights(const Graph& g, std::span<const double> w, double tol) {
  validate_weights(g, w);
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(total - 1.0) > tol) throw Error(Errc::invalid_argument, "dual weights must sum to 1");
}

std::vector<Vertex> mask_to_vertices(VertexMask mask) {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

VertexMask vertices_to_mask(std::span<const Vertex> vertices) {
  VertexMask mask = 0;
  for (Vertex v : vertices) {
    if (v < 0 || v >= 64) throw Error(Errc::invalid_argument, "vertex mask limited to 64 vertices");
    mask |= VertexMask{1} << v;
  }
  return mask;
}

std::vector<EdgeId> induced_edges(const Graph& g, std::span<const Vertex> subset) {
  std::vector<char> inside(static_cast<std::size_t>(g.node_count()), 0);
  for (Vertex v : subset) {
    if (v < 0 || v >= g.node_count()) throw Error(Errc::invalid_argument, "vertex out of range");
    inside[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (inside[static_cast<std::size_t>(g.edge(e).u)] && inside[static_cast<std::size_t>(g.edge(e).v)])
      out.push_back(e);
  return out;
}

std::optional<int> girth(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.node_count());
  int best = -1;
  std::vector<int> dist(n);
  std::vector<EdgeId> via(n);
  for (Vertex root = 0; root < g.node_count(); ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(root)] = 0;
    via[static_cast<std::size_t>(root)] = -1;
    std::queue<Vertex> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      Vertex x = frontier.front();
      frontier.pop();
      const int dx = dist[static_cast<std::size_t>(x)];
      if (best != -1 && 2 * dx + 1 >= best) break;
      for (const Incidence& inc : g.incident(x)) {
        if (inc.edge == via[static_cast<std::size_t>(x)]) continue;
        const auto y = static_cast<std::size_t>(inc.neighbor);
        if (dist[y] == -1) {
          dist[y] = dx + 1;
          via[y] = inc.edge;
          frontier.push(inc.neighbor);
        } else {
          int len = dx + dist[y] + 1;
          if (best == -1 || len < best) best = len;
        }
      }
    }
  }
  if (best == -1) return std::nullopt;
  return best;
}

}  // namespace logpart
