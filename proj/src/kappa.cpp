#include "logpart/kappa.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "logpart/error.hpp"
#include "logpart/model.hpp"

namespace logpart {

TreeDistribution make_tree_distribution(const Graph& g, std::vector<WeightedSpanningTree> weighted) {
  std::sort(weighted.begin(), weighted.end(),
            [](const WeightedSpanningTree& a, const WeightedSpanningTree& b) { return a.tree < b.tree; });
  TreeDistribution rho;
  double total = 0.0;
  for (auto& item : weighted) {
    if (!std::isfinite(item.probability) || item.probability < 0.0)
      throw Error(Errc::invalid_argument, "tree probabilities must be finite and >= 0");
    total += item.probability;
    if (item.probability == 0.0) continue;
    if (!rho.support.empty() && rho.support.back().tree == item.tree)
      rho.support.back().probability += item.probability;
    else
      rho.support.push_back(std::move(item));
  }
  if (rho.support.empty() || std::abs(total - 1.0) > 1e-10)
    throw Error(Errc::invalid_argument, "tree probabilities must sum to 1");
  rho.edge_marginals.assign(static_cast<std::size_t>(g.edge_count()), 0.0);
  for (const auto& item : rho.support)
    for (EdgeId e : item.tree.edges()) rho.edge_marginals[static_cast<std::size_t>(e)] += item.probability;
  return rho;
}

TreeDistribution point_mass(const Graph& g, const SpanningTree& tree) {
  return make_tree_distribution(g, {{tree, 1.0}});
}

double min_marginal(const TreeDistribution& rho) {
  if (rho.edge_marginals.empty()) return 1.0;
  return *std::min_element(rho.edge_marginals.begin(), rho.edge_marginals.end());
}

namespace {

void require_mask_capable(const Graph& g, const Caps& caps, const char* what) {
  if (g.node_count() > caps.subset_nodes || g.node_count() > 62)
    throw Error(Errc::cap_exceeded, std::string(what) + ": N exceeds the subset-enumeration cap");
}

std::vector<VertexMask> adjacency_masks(const Graph& g) {
  std::vector<VertexMask> adj(static_cast<std::size_t>(g.node_count()), 0);
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)] |= VertexMask{1} << e.v;
    adj[static_cast<std::size_t>(e.v)] |= VertexMask{1} << e.u;
  }
  return adj;
}

// Lexicographic order of the sorted vertex lists encoded by two masks.
bool lex_less(VertexMask a, VertexMask b) {
  while (a && b) {
    int x = std::countr_zero(a), y = std::countr_zero(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
  return !a && b;
}

// Calls visit(mask, |E(mask)|) for every non-empty vertex subset.
template <class Visit>
void for_each_subset(const Graph& g, Visit&& visit) {
  const int n = g.node_count();
  const auto adj = adjacency_masks(g);
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::uint16_t> inner(total, 0);
  for (std::size_t s = 1; s < total; ++s) {
    const int low = std::countr_zero(s);
    const std::size_t rest = s & (s - 1);
    inner[s] = static_cast<std::uint16_t>(inner[rest] + std::popcount(adj[static_cast<std::size_t>(low)] & rest));
    visit(static_cast<VertexMask>(s), static_cast<int>(inner[s]));
  }
}

}  // namespace

std::vector<std::string> tree_distribution_violations(const Graph& g, const TreeDistribution& rho,
                                                      const Caps& caps) {
  std::vector<std::string> out;
  const auto m = static_cast<std::size_t>(g.edge_count());
  if (rho.edge_marginals.size() != m) {
    out.push_back("edge marginal vector has wrong length");
    return out;
  }
  double mass = 0.0;
  std::vector<double> recomputed(m, 0.0);
  for (const auto& item : rho.support) {
    if (!(item.probability > 0.0)) out.push_back("non-positive tree probability");
    mass += item.probability;
    try {
      SpanningTree check(g, item.tree.edges());
    } catch (const Error& err) {
      out.push_back(std::string("support entry is not a spanning tree: ") + err.what());
      continue;
    }
    for (EdgeId e : item.tree.edges()) recomputed[static_cast<std::size_t>(e)] += item.probability;
  }
  if (std::abs(mass - 1.0) > 1e-10) out.push_back("tree probabilities sum to " + format_real(mass));
  double marginal_sum = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    marginal_sum += rho.edge_marginals[e];
    if (std::abs(recomputed[e] - rho.edge_marginals[e]) > 1e-10)
      out.push_back("marginal of edge " + std::to_string(e) + " inconsistent with support");
  }
  if (std::abs(marginal_sum - (g.node_count() - 1)) > 1e-9)
    out.push_back("edge marginals sum to " + format_real(marginal_sum) + ", expected N-1");
  if (g.node_count() <= caps.subset_nodes && g.node_count() <= 62) {
    const auto adj = adjacency_masks(g);
    const int n = g.node_count();
    const std::size_t total = std::size_t{1} << n;
    std::vector<double> load(total, 0.0);
    // Per-vertex list of (neighbor mask bit, marginal).
    std::vector<std::vector<std::pair<VertexMask, double>>> nbr(static_cast<std::size_t>(n));
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edge(e);
      nbr[static_cast<std::size_t>(ed.u)].emplace_back(VertexMask{1} << ed.v, rho.edge_marginals[static_cast<std::size_t>(e)]);
      nbr[static_cast<std::size_t>(ed.v)].emplace_back(VertexMask{1} << ed.u, rho.edge_marginals[static_cast<std::size_t>(e)]);
    }
    bool reported = false;
    for (std::size_t s = 1; s < total && !reported; ++s) {
      const int low = std::countr_zero(s);
      const std::size_t rest = s & (s - 1);
      double add = 0.0;
      for (auto [bit, r] : nbr[static_cast<std::size_t>(low)])
        if (rest & bit) add += r;
      load[s] = load[rest] + add;
      if (load[s] > std::popcount(s) - 1 + 1e-9) {
        out.push_back("rank constraint violated on vertex set " + std::to_string(s));
        reported = true;
      }
    }
  }
  return out;
}

KappaCertificate kappa_exact(const Graph& g, const Caps& caps) {
  g.require_connected("kappa_exact");
  if (g.edge_count() == 0) throw Error(Errc::invalid_argument, "kappa is undefined for a graph without edges");
  require_mask_capable(g, caps, "kappa_exact");

  std::int64_t best_num = 1, best_den = 0;  // (|S|-1, |E(S)|) of the incumbent
  VertexMask best_set = 0;
  for_each_subset(g, [&](VertexMask s, int inner) {
    if (inner == 0) return;
    const std::int64_t num = std::popcount(s) - 1;
    if (best_den == 0) {
      best_num = num, best_den = inner, best_set = s;
      return;
    }
    const std::int64_t lhs = num * best_den, rhs = best_num * inner;
    if (lhs < rhs || (lhs == rhs && lex_less(s, best_set))) best_num = num, best_den = inner, best_set = s;
  });

  KappaCertificate cert;
  cert.kappa = Rational(best_num, best_den);
  cert.dual_S = mask_to_vertices(best_set);
  cert.dual_w = dual_certificate(g, cert.dual_S).w;
  cert.primal = exact_balanced_covering(g, cert.kappa);
  cert.gap = std::max(0.0, cert.kappa.to_double() - min_marginal(cert.primal));
  return cert;
}

Rational kappa_subgraph_form(const Graph& g, const Caps& caps) {
  if (g.edge_count() == 0) throw Error(Errc::invalid_argument, "no non-empty edge subsets");
  if (g.edge_count() > caps.edge_subset) throw Error(Errc::cap_exceeded, "edge count exceeds the edge-subset cap");
  // rank(F) = |V(F)| - c(F) is the number of successful unions.
  UndoableDisjointSets dsu(g.node_count());
  std::int64_t best_num = 0, best_den = 0;
  auto recurse = [&](auto&& self, EdgeId next, std::int64_t size, std::int64_t rank) -> void {
    if (next == g.edge_count()) {
      if (size == 0) return;
      if (best_den == 0 || rank * best_den < best_num * size) best_num = rank, best_den = size;
      return;
    }
    const auto mark = dsu.checkpoint();
    const bool joined = dsu.unite(g.edge(next).u, g.edge(next).v);
    self(self, next + 1, size + 1, rank + (joined ? 1 : 0));
    dsu.rollback(mark);
    self(self, next + 1, size, rank);
  };
  recurse(recurse, 0, 0, 0);
  return Rational(best_num, best_den);
}

namespace {

// Edmonds' matroid partition: elements are edge copies, each assigned to one
// of `k` forests or still pending.
class ForestPartition {
 public:
  ForestPartition(const Graph& g, int k) : g_(g), k_(k), members_(static_cast<std::size_t>(k)) {}

  // Inserts an element for graph edge `edge`; false if no augmenting path exists.
  bool insert(EdgeId edge) {
    const int id = static_cast<int>(element_edge_.size());
    element_edge_.push_back(edge);
    element_forest_.push_back(-1);

    std::vector<int> prev(element_edge_.size(), -2);
    std::vector<int> via(element_edge_.size(), -1);
    std::vector<int> queue{id};
    prev[static_cast<std::size_t>(id)] = -1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int y = queue[head];
      const Edge& ye = g_.edge(element_edge_[static_cast<std::size_t>(y)]);
      for (int f = 0; f < k_; ++f) {
        if (element_forest_[static_cast<std::size_t>(y)] == f) continue;
        auto cycle = path_in_forest(f, ye.u, ye.v);
        if (!cycle) {
          augment(y, f, prev, via);
          return true;
        }
        for (int z : *cycle) {
          if (prev[static_cast<std::size_t>(z)] != -2) continue;
          prev[static_cast<std::size_t>(z)] = y;
          via[static_cast<std::size_t>(z)] = f;
          queue.push_back(z);
        }
      }
    }
    element_edge_.pop_back();
    element_forest_.pop_back();
    return false;
  }

  std::vector<std::vector<EdgeId>> forests() const {
    std::vector<std::vector<EdgeId>> out(static_cast<std::size_t>(k_));
    for (int f = 0; f < k_; ++f)
      for (int el : members_[static_cast<std::size_t>(f)])
        out[static_cast<std::size_t>(f)].push_back(element_edge_[static_cast<std::size_t>(el)]);
    return out;
  }

 private:
  // Elements of forest f on the path a..b, or nullopt if a and b are not connected in f.
  std::optional<std::vector<int>> path_in_forest(int f, Vertex a, Vertex b) const {
    const auto n = static_cast<std::size_t>(g_.node_count());
    std::vector<std::vector<std::pair<Vertex, int>>> adj(n);
    for (int el : members_[static_cast<std::size_t>(f)]) {
      const Edge& e = g_.edge(element_edge_[static_cast<std::size_t>(el)]);
      adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, el);
      adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, el);
    }
    std::vector<int> via_el(n, -1);
    std::vector<Vertex> from(n, -1);
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{a};
    seen[static_cast<std::size_t>(a)] = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      if (x == b) break;
      for (auto [y, el] : adj[static_cast<std::size_t>(x)]) {
        if (seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = 1;
        from[static_cast<std::size_t>(y)] = x;
        via_el[static_cast<std::size_t>(y)] = el;
        stack.push_back(y);
      }
    }
    if (!seen[static_cast<std::size_t>(b)]) return std::nullopt;
    std::vector<int> path;
    for (Vertex x = b; x != a; x = from[static_cast<std::size_t>(x)]) path.push_back(via_el[static_cast<std::size_t>(x)]);
    return path;
  }

  void move_to(int el, int f) {
    const int old = element_forest_[static_cast<std::size_t>(el)];
    if (old >= 0) {
      auto& v = members_[static_cast<std::size_t>(old)];
      v.erase(std::find(v.begin(), v.end(), el));
    }
    element_forest_[static_cast<std::size_t>(el)] = f;
    members_[static_cast<std::size_t>(f)].push_back(el);
  }

  // y enters forest f; every element on the BFS path shifts one step along it.
  void augment(int y, int f, const std::vector<int>& prev, const std::vector<int>& via) {
    int current = y, target = f;
    while (current != -1) {
      const int next_target = via[static_cast<std::size_t>(current)];
      const int parent = prev[static_cast<std::size_t>(current)];
      move_to(current, target);
      target = next_target;
      current = parent;
    }
  }

  const Graph& g_;
  int k_;
  std::vector<std::vector<int>> members_;
  std::vector<EdgeId> element_edge_;
  std::vector<int> element_forest_;
};

}  // namespace

TreeDistribution exact_balanced_covering(const Graph& g, Rational kappa) {
  g.require_connected("exact_balanced_covering");
  if (kappa.num() <= 0 || kappa > Rational(1)) throw Error(Errc::invalid_argument, "kappa must lie in (0, 1]");
  const auto p = static_cast<int>(kappa.num());
  const auto k = static_cast<int>(kappa.den());
  ForestPartition partition(g, k);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (int copy = 0; copy < p; ++copy)
      if (!partition.insert(e))
        throw Error(Errc::invariant_violation,
                    "edge multigraph does not split into " + std::to_string(k) + " forests; kappa too large");

  std::vector<WeightedSpanningTree> weighted;
  for (auto& forest : partition.forests()) {
    DisjointSets dsu(g.node_count());
    std::vector<EdgeId> edges;
    for (EdgeId e : forest) {
      dsu.unite(g.edge(e).u, g.edge(e).v);
      edges.push_back(e);
    }
    for (EdgeId e = 0; e < g.edge_count() && dsu.components() > 1; ++e)
      if (dsu.unite(g.edge(e).u, g.edge(e).v)) edges.push_back(e);
    weighted.push_back({SpanningTree(g, std::move(edges)), 1.0 / k});
  }
  return make_tree_distribution(g, std::move(weighted));
}

namespace {

// Kruskal without validation for the inner MW loop.
class BestResponse {
 public:
  explicit BestResponse(const Graph& g) : g_(g), order_(static_cast<std::size_t>(g.edge_count())) {}

  // Fills `tree` with the max-weight spanning tree edges (sorted), returns its weight.
  double operator()(std::span<const double> w, std::vector<EdgeId>& tree) {
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](EdgeId a, EdgeId b) {
      const double wa = w[static_cast<std::size_t>(a)], wb = w[static_cast<std::size_t>(b)];
      return wa > wb || (wa == wb && a < b);
    });
    DisjointSets dsu(g_.node_count());
    tree.clear();
    double total = 0.0;
    for (EdgeId e : order_) {
      if (dsu.unite(g_.edge(e).u, g_.edge(e).v)) {
        tree.push_back(e);
        if (static_cast<int>(tree.size()) == g_.node_count() - 1) break;
      }
    }
    std::sort(tree.begin(), tree.end());
    for (EdgeId e : tree) total += w[static_cast<std::size_t>(e)];
    return total;
  }

 private:
  const Graph& g_;
  std::vector<EdgeId> order_;
};

}  // namespace

BalancedCovering balanced_covering(const Graph& g, std::int64_t iterations, double tol) {
  g.require_connected("balanced_covering");
  if (g.edge_count() == 0) throw Error(Errc::invalid_argument, "balanced covering needs at least one edge");
  if (iterations < 1) throw Error(Errc::invalid_argument, "iterations must be >= 1");
  const auto m = static_cast<std::size_t>(g.edge_count());
  BestResponse respond(g);

  BalancedCovering best;
  best.lower = -1.0;
  best.upper = std::numeric_limits<double>::infinity();
  std::map<std::vector<EdgeId>, std::int64_t> best_trees;
  std::int64_t best_rounds = 0;

  std::vector<double> logw(m), w(m), avg(m), avg_norm(m);
  std::vector<std::int64_t> hits(m);
  std::vector<EdgeId> tree, scratch;
  std::int64_t total_rounds = 0;
  bool done = false;

  for (std::int64_t horizon = 1; !done; horizon = std::min(horizon * 2, iterations)) {
    const double eta = std::sqrt(8.0 * std::log(static_cast<double>(m)) / static_cast<double>(horizon));
    std::fill(logw.begin(), logw.end(), 0.0);
    std::fill(avg.begin(), avg.end(), 0.0);
    std::fill(hits.begin(), hits.end(), 0);
    std::map<std::vector<EdgeId>, std::int64_t> trees;

    for (std::int64_t t = 1; t <= horizon; ++t) {
      const double top = *std::max_element(logw.begin(), logw.end());
      double norm = 0.0;
      for (std::size_t e = 0; e < m; ++e) norm += (w[e] = std::exp(logw[e] - top));
      for (double& x : w) x /= norm;

      const double value = respond(w, tree);
      if (value < best.upper) {
        best.upper = value;
        best.dual_w = w;
      }
      for (std::size_t e = 0; e < m; ++e) avg[e] += w[e];
      for (EdgeId e : tree) {
        ++hits[static_cast<std::size_t>(e)];
        logw[static_cast<std::size_t>(e)] -= eta;
      }
      ++trees[tree];
      ++total_rounds;

      if ((t & (t - 1)) != 0 && t != horizon) continue;
      const double lower = static_cast<double>(*std::min_element(hits.begin(), hits.end())) / static_cast<double>(t);
      if (lower > best.lower) {
        best.lower = lower;
        best_trees = trees;
        best_rounds = t;
      }
      for (std::size_t e = 0; e < m; ++e) avg_norm[e] = avg[e] / static_cast<double>(t);
      const double averaged = respond(avg_norm, scratch);
      if (averaged < best.upper) {
        best.upper = averaged;
        best.dual_w = avg_norm;
      }
      if (best.upper - best.lower <= tol) {
        done = true;
        break;
      }
    }
    if (horizon >= iterations) done = true;
  }

  std::vector<WeightedSpanningTree> weighted;
  for (const auto& [edges, count] : best_trees)
    weighted.push_back({SpanningTree(g, edges), static_cast<double>(count) / static_cast<double>(best_rounds)});
  best.distribution = make_tree_distribution(g, std::move(weighted));
  best.lower = min_marginal(best.distribution);
  best.rounds = total_rounds;
  return best;
}

DualCertificate dual_certificate(const Graph& g, std::span<const Vertex> subset) {
  const auto inner = induced_edges(g, subset);
  if (inner.empty()) throw Error(Errc::invalid_argument, "vertex set induces no edges");
  DualCertificate cert;
  cert.w.assign(static_cast<std::size_t>(g.edge_count()), 0.0);
  const double share = 1.0 / static_cast<double>(inner.size());
  for (EdgeId e : inner) cert.w[static_cast<std::size_t>(e)] = share;
  cert.value = max_weight_spanning_tree(g, cert.w).total_weight;
  DisjointSets dsu(g.node_count());
  std::int64_t rank = 0;
  for (EdgeId e : inner) rank += dsu.unite(g.edge(e).u, g.edge(e).v) ? 1 : 0;
  cert.exact_value = Rational(rank, static_cast<std::int64_t>(inner.size()));
  return cert;
}

Rational max_average_degree(const Graph& g, const Caps& caps) {
  require_mask_capable(g, caps, "max_average_degree");
  Rational best(0);
  std::int64_t best_num = 0, best_den = 1;
  for_each_subset(g, [&](VertexMask s, int inner) {
    const std::int64_t num = 2 * static_cast<std::int64_t>(inner), den = std::popcount(s);
    if (num * best_den > best_num * den) best_num = num, best_den = den;
  });
  return Rational(best_num, best_den);
}

namespace {

// Densest prefix found by repeatedly deleting a minimum-degree vertex.
Rational peeling_average_degree(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> degree(static_cast<std::size_t>(n));
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) degree[static_cast<std::size_t>(v)] = g.degree(v);
  std::int64_t edges = g.edge_count(), alive = n;
  std::int64_t best_num = 2 * edges, best_den = alive;
  while (alive > 1) {
    Vertex pick = -1;
    for (Vertex v = 0; v < n; ++v)
      if (!removed[static_cast<std::size_t>(v)] &&
          (pick == -1 || degree[static_cast<std::size_t>(v)] < degree[static_cast<std::size_t>(pick)]))
        pick = v;
    removed[static_cast<std::size_t>(pick)] = 1;
    edges -= degree[static_cast<std::size_t>(pick)];
    --alive;
    for (const Incidence& inc : g.incident(pick))
      if (!removed[static_cast<std::size_t>(inc.neighbor)]) --degree[static_cast<std::size_t>(inc.neighbor)];
    if (2 * edges * best_den > best_num * alive) best_num = 2 * edges, best_den = alive;
  }
  return Rational(best_num, best_den);
}

}  // namespace

StructuralKappaBounds kappa_bounds_structural(const Graph& g, const Caps& caps) {
  g.require_connected("kappa_bounds_structural");
  StructuralKappaBounds out;
  if (g.node_count() <= caps.subset_nodes && g.node_count() <= 62) {
    out.mad = max_average_degree(g, caps);
  } else {
    // Peeling finds a subgraph of at least half the maximum density, so twice
    // its average degree bounds the maximum average degree from above.
    const Rational peel = peeling_average_degree(g);
    const Rational doubled(2 * peel.num(), peel.den());
    out.mad = std::min(doubled, Rational(g.max_degree()));
    out.mad_exact = false;
  }
  out.mad_bound = 2.0 * static_cast<double>(out.mad.den()) / static_cast<double>(out.mad.num() + out.mad.den());
  out.girth = girth(g);
  if (out.girth && *out.girth > 3) {
    const double gl = *out.girth;
    const double n = g.node_count();
    out.girth_bound = 2.0 / (1.0 + std::pow(n, 2.0 / (gl - 3.0))) * (1.0 - 1.0 / gl);
  }
  return out;
}

namespace {

std::string tree_line(const WeightedSpanningTree& item) {
  std::string line = "primal_tree " + format_real(item.probability);
  for (EdgeId e : item.tree.edges()) line += " " + std::to_string(e);
  return line + "\n";
}

}  // namespace

std::string format_certificate(const KappaCertificate& cert) {
  std::string out = "kappa " + cert.kappa.str() + "\n";
  out += "dual_S";
  for (Vertex v : cert.dual_S) out += " " + std::to_string(v);
  out += "\n";
  for (const auto& item : cert.primal.support) out += tree_line(item);
  return out;
}

std::string format_certificate(const BalancedCovering& covering) {
  std::string out = "kappa_lower " + format_real(covering.lower) + "\n";
  out += "kappa_upper " + format_real(covering.upper) + "\n";
  out += "dual_w";
  for (double x : covering.dual_w) out += " " + format_real(x);
  out += "\n";
  for (const auto& item : covering.distribution.support) out += tree_line(item);
  return out;
}

bool CertificateCheck::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

namespace {

struct ParsedCertificate {
  std::optional<Rational> kappa;
  std::optional<double> lower, upper;
  std::optional<std::vector<Vertex>> dual_S;
  std::optional<std::vector<double>> dual_w;
  std::vector<std::pair<double, std::vector<EdgeId>>> trees;
};

template <class T>
T parse_number(std::string_view tok, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(Errc::malformed_input, "bad number '" + std::string(tok) + "'", line);
  return value;
}

ParsedCertificate parse_certificate(std::string_view text) {
  ParsedCertificate cert;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key == "kappa" && tok.size() == 2) {
      auto slash = tok[1].find('/');
      if (slash == std::string::npos) throw Error(Errc::malformed_input, "kappa must be p/q", number);
      cert.kappa = Rational(parse_number<std::int64_t>(std::string_view(tok[1]).substr(0, slash), number),
                            parse_number<std::int64_t>(std::string_view(tok[1]).substr(slash + 1), number));
    } else if (key == "kappa_lower" && tok.size() == 2) {
      cert.lower = parse_number<double>(tok[1], number);
    } else if (key == "kappa_upper" && tok.size() == 2) {
      cert.upper = parse_number<double>(tok[1], number);
    } else if (key == "dual_S") {
      std::vector<Vertex> s;
      for (std::size_t i = 1; i < tok.size(); ++i) s.push_back(parse_number<int>(tok[i], number));
      cert.dual_S = std::move(s);
    } else if (key == "dual_w") {
      std::vector<double> w;
      for (std::size_t i = 1; i < tok.size(); ++i) w.push_back(parse_number<double>(tok[i], number));
      cert.dual_w = std::move(w);
    } else if (key == "primal_tree" && tok.size() >= 2) {
      std::vector<EdgeId> edges;
      for (std::size_t i = 2; i < tok.size(); ++i) edges.push_back(parse_number<int>(tok[i], number));
      cert.trees.emplace_back(parse_number<double>(tok[1], number), std::move(edges));
    } else {
      throw Error(Errc::malformed_input, "unknown certificate line '" + key + "'", number);
    }
  }
  return cert;
}

}  // namespace

CertificateCheck verify_certificate(const Graph& g, std::string_view text) {
  const ParsedCertificate cert = parse_certificate(text);
  CertificateCheck result;
  auto record = [&](std::string name, bool ok) { result.checks.emplace_back(std::move(name), ok); };

  std::optional<double> claimed_upper, claimed_lower;
  if (cert.kappa) claimed_upper = claimed_lower = cert.kappa->to_double();
  if (cert.upper) claimed_upper = cert.upper;
  if (cert.lower) claimed_lower = cert.lower;
  if (!claimed_upper || !claimed_lower) {
    record("kappa value present", false);
    return result;
  }

  if (cert.dual_S) {
    bool ok = false;
    try {
      const DualCertificate dual = dual_certificate(g, *cert.dual_S);
      ok = dual.value <= *claimed_upper + 1e-9;
      if (cert.kappa) {
        const auto s = static_cast<std::int64_t>(cert.dual_S->size());
        const auto inner = static_cast<std::int64_t>(induced_edges(g, *cert.dual_S).size());
        ok = ok && Rational(s - 1, inner) == *cert.kappa && dual.exact_value == *cert.kappa;
      }
    } catch (const Error&) {
      ok = false;
    }
    record("dual max-weight spanning tree under uniform weights on E(S)", ok);
  }
  if (cert.dual_w) {
    bool ok = false;
    try {
      validate_dual_weights(g, *cert.dual_w, 1e-9);
      ok = max_weight_spanning_tree(g, *cert.dual_w).total_weight <= *claimed_upper + 1e-9;
    } catch (const Error&) {
      ok = false;
    }
    record("dual weight vector bounds every spanning tree", ok);
  }

  bool primal_ok = !cert.trees.empty();
  if (primal_ok) {
    try {
      std::vector<WeightedSpanningTree> weighted;
      for (const auto& [prob, edges] : cert.trees) weighted.push_back({SpanningTree(g, edges), prob});
      const TreeDistribution rho = make_tree_distribution(g, std::move(weighted));
      primal_ok = min_marginal(rho) >= *claimed_lower - 1e-9;
    } catch (const Error&) {
      primal_ok = false;
    }
  }
  record("primal tree distribution covers every edge at the claimed level", primal_ok);
  record("claimed lower bound <= claimed upper bound", *claimed_lower <= *claimed_upper + 1e-12);
  return result;
}

}  // namespace logpart
