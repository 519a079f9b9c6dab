#include "logpart/generators.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

#include "logpart/error.hpp"
#include "logpart/random.hpp"

namespace logpart {

namespace {

constexpr std::array<std::pair<GraphFamily, std::string_view>, 9> kFamilies{{
    {GraphFamily::tree, "tree"},
    {GraphFamily::path, "path"},
    {GraphFamily::star, "star"},
    {GraphFamily::cycle, "cycle"},
    {GraphFamily::complete, "complete"},
    {GraphFamily::grid, "grid"},
    {GraphFamily::random_regular, "random_regular"},
    {GraphFamily::erdos_renyi, "erdos_renyi"},
    {GraphFamily::petersen, "petersen"},
}};

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::invalid_argument, what);
}

EdgeList pruefer_tree(int n, std::mt19937_64& rng) {
  EdgeList edges;
  if (n <= 1) return edges;
  if (n == 2) return {{0, 1}};
  std::vector<int> code(static_cast<std::size_t>(n - 2));
  for (int& c : code) c = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int c : code) ++degree[static_cast<std::size_t>(c)];
  std::set<int> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[static_cast<std::size_t>(v)] == 1) leaves.insert(v);
  for (int c : code) {
    int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, c);
    if (--degree[static_cast<std::size_t>(c)] == 1) leaves.insert(c);
  }
  int a = *leaves.begin();
  int b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return edges;
}

// Configuration-model pairing; returns nullopt on a loop or parallel edge.
std::optional<EdgeList> pair_stubs(int n, int d, std::mt19937_64& rng) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n * d));
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);
  for (std::size_t i = stubs.size(); i > 1; --i)
    std::swap(stubs[i - 1], stubs[uniform_below(rng, i)]);
  std::set<std::pair<int, int>> seen;
  EdgeList edges;
  for (std::size_t i = 0; i < stubs.size(); i += 2) {
    int a = std::min(stubs[i], stubs[i + 1]);
    int b = std::max(stubs[i], stubs[i + 1]);
    if (a == b || !seen.insert({a, b}).second) return std::nullopt;
    edges.emplace_back(a, b);
  }
  return edges;
}

}  // namespace

std::optional<GraphFamily> parse_family(std::string_view name) {
  for (auto [family, label] : kFamilies)
    if (label == name) return family;
  return std::nullopt;
}

std::string_view family_name(GraphFamily family) {
  for (auto [f, label] : kFamilies)
    if (f == family) return label;
  return "unknown";
}

Graph generate_graph(GraphFamily family, const FamilyParams& params, std::uint64_t seed) {
  const int n = params.n;
  EdgeList edges;
  switch (family) {
    case GraphFamily::tree: {
      require(n >= 1, "tree needs n >= 1");
      auto rng = stream_rng(seed, 0);
      return Graph(n, pruefer_tree(n, rng));
    }
    case GraphFamily::path:
      require(n >= 1, "path needs n >= 1");
      for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
      return Graph(n, std::move(edges));
    case GraphFamily::star:
      require(n >= 1, "star needs n >= 1");
      for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
      return Graph(n, std::move(edges));
    case GraphFamily::cycle:
      require(n >= 3, "cycle needs n >= 3");
      for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
      return Graph(n, std::move(edges));
    case GraphFamily::complete:
      require(n >= 1, "complete graph needs n >= 1");
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
      return Graph(n, std::move(edges));
    case GraphFamily::grid: {
      const int w = params.width, h = params.height;
      require(w >= 1 && h >= 1, "grid needs width, height >= 1");
      for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
          if (c + 1 < w) edges.emplace_back(grid_vertex(w, r, c), grid_vertex(w, r, c + 1));
          if (r + 1 < h) edges.emplace_back(grid_vertex(w, r, c), grid_vertex(w, r + 1, c));
        }
      return Graph(w * h, std::move(edges));
    }
    case GraphFamily::petersen:
      for (int i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(i, i + 5);
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);
      }
      return Graph(10, std::move(edges));
    case GraphFamily::random_regular: {
      const int d = params.degree;
      require(n >= 2 && d >= 1 && d < n && (n * d) % 2 == 0, "random_regular needs d < n and d*n even");
      for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        auto rng = stream_rng(seed, static_cast<std::uint64_t>(attempt));
        auto pairing = pair_stubs(n, d, rng);
        if (!pairing) continue;
        Graph g(n, std::move(*pairing));
        if (g.connected()) return g;
      }
      throw Error(Errc::cap_exceeded, "random_regular: no connected simple sample within retry cap");
    }
    case GraphFamily::erdos_renyi: {
      require(n >= 1 && params.p >= 0.0 && params.p <= 1.0, "erdos_renyi needs n >= 1 and p in [0,1]");
      for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        auto rng = stream_rng(seed, static_cast<std::uint64_t>(attempt));
        EdgeList sample;
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            if (uniform_unit(rng) < params.p) sample.emplace_back(a, b);
        Graph g(n, std::move(sample));
        if (g.connected()) return g;
      }
      throw Error(Errc::cap_exceeded, "erdos_renyi: no connected sample within retry cap");
    }
  }
  throw Error(Errc::invalid_argument, "unknown graph family");
}

PairwiseModel random_model(const Graph& g, const ModelParams& params, std::uint64_t seed) {
  auto rng = stream_rng(seed, 0x6d6f64656cULL);
  const auto cells = static_cast<std::size_t>(params.alphabet * params.alphabet);
  std::vector<double> theta;
  std::vector<std::vector<double>> tables;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    theta.push_back(uniform_real(rng, params.theta_min, params.theta_max));
    std::vector<double> table(cells);
    for (double& x : table) x = uniform_real(rng, 0.0, params.potential_max);
    tables.push_back(std::move(table));
  }
  return PairwiseModel(g, params.alphabet, std::move(theta), std::move(tables));
}

PairwiseModel uniform_model(const Graph& g, int alphabet, double theta, const std::vector<double>& table) {
  const auto m = static_cast<std::size_t>(g.edge_count());
  return PairwiseModel(g, alphabet, std::vector<double>(m, theta), std::vector<std::vector<double>>(m, table));
}

}  // namespace logpart
