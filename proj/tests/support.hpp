#pragma once

// Naive reference implementations used as test oracles. They share no code
// with the library beyond the Graph and PairwiseModel containers.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "logpart/graph.hpp"
#include "logpart/model.hpp"

namespace oracle {

using logpart::Graph;
using logpart::PairwiseModel;

inline Graph make_graph(int n, std::vector<std::pair<int, int>> edges) { return Graph(n, std::move(edges)); }

inline Graph complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

inline Graph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

inline Graph path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

// K_4 minus the edge (2,3): four vertices, five edges.
inline Graph diamond() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}); }

inline Graph petersen() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, e);
}

inline int root(std::vector<int>& p, int x) {
  while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)];
  return x;
}

/// Components of (V, chosen edges).
inline int components(const Graph& g, const std::vector<int>& chosen) {
  std::vector<int> p(static_cast<std::size_t>(g.node_count()));
  std::iota(p.begin(), p.end(), 0);
  int c = g.node_count();
  for (int e : chosen) {
    int a = root(p, g.edge(e).u), b = root(p, g.edge(e).v);
    if (a != b) p[static_cast<std::size_t>(a)] = b, --c;
  }
  return c;
}

/// Every (N-1)-edge subset that connects the graph.
inline std::vector<std::vector<int>> spanning_trees(const Graph& g) {
  std::vector<std::vector<int>> out;
  const int m = g.edge_count(), k = g.node_count() - 1;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(pick.size()) == k) {
      if (components(g, pick) == 1) out.push_back(pick);
      return;
    }
    if (m - next < k - static_cast<int>(pick.size())) return;
    pick.push_back(next);
    self(self, next + 1);
    pick.pop_back();
    self(self, next + 1);
  };
  rec(rec, 0);
  return out;
}

/// Fraction of spanning trees containing each edge.
inline std::vector<double> tree_marginals(const Graph& g) {
  const auto trees = spanning_trees(g);
  std::vector<double> share(static_cast<std::size_t>(g.edge_count()), 0.0);
  for (const auto& t : trees)
    for (int e : t) share[static_cast<std::size_t>(e)] += 1.0;
  for (double& s : share) s /= static_cast<double>(trees.size());
  return share;
}

/// log Z by direct summation of exp over all configurations.
inline double log_partition(const PairwiseModel& m, const std::vector<double>& theta) {
  const Graph& g = m.graph();
  const int q = m.alphabet_size(), n = g.node_count();
  std::vector<int> x(static_cast<std::size_t>(n), 0);
  double top = -INFINITY;
  std::vector<double> energies;
  while (true) {
    double s = 0.0;
    for (int e = 0; e < g.edge_count(); ++e)
      s += theta[static_cast<std::size_t>(e)] *
           m.potential(e, x[static_cast<std::size_t>(g.edge(e).u)], x[static_cast<std::size_t>(g.edge(e).v)]);
    energies.push_back(s);
    top = std::max(top, s);
    int i = 0;
    while (i < n && ++x[static_cast<std::size_t>(i)] == q) x[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  long double z = 0.0L;
  for (double s : energies) z += std::exp(static_cast<long double>(s - top));
  return top + static_cast<double>(std::log(z));
}

inline double log_partition(const PairwiseModel& m) { return log_partition(m, m.theta()); }

/// min over vertex sets with at least one inner edge of (|S|-1)/|E(S)|, as (num, den).
inline std::pair<long long, long long> kappa(const Graph& g) {
  long long bn = 1, bd = 0;
  const int n = g.node_count();
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    long long inner = 0;
    for (const auto& e : g.edges()) inner += ((s >> e.u) & 1U) && ((s >> e.v) & 1U);
    if (inner == 0) continue;
    const long long num = __builtin_popcountll(s) - 1;
    if (bd == 0 || num * bd < bn * inner) bn = num, bd = inner;
  }
  const long long d = std::gcd(bn, bd);
  return {bn / d, bd / d};
}

inline int maxcut(const Graph& g) {
  int best = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.node_count()); ++s) {
    int cut = 0;
    for (const auto& e : g.edges()) cut += ((s >> e.u) ^ (s >> e.v)) & 1U;
    best = std::max(best, cut);
  }
  return best;
}

/// Connected graph on n vertices: random spanning tree plus extra edges.
inline Graph random_connected(std::mt19937_64& rng, int n, int max_edges) {
  std::vector<std::pair<int, int>> e;
  std::vector<std::vector<char>> has(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int v = 1; v < n; ++v) {
    int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
    e.emplace_back(u, v);
    has[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
  }
  const int cap = std::min(max_edges, n * (n - 1) / 2);
  const int target = n - 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cap - (n - 1) + 1));
  while (static_cast<int>(e.size()) < target) {
    int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (has[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) continue;
    has[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    e.emplace_back(a, b);
  }
  return Graph(n, e);
}

}  // namespace oracle
