#include "logpart/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "logpart/error.hpp"

namespace logpart {

const char* to_string(PhiMethod method) noexcept {
  switch (method) {
    case PhiMethod::brute_force: return "brute_force";
    case PhiMethod::tree_sum_product: return "tree_sum_product";
    case PhiMethod::component_product: return "component_product";
  }
  return "unknown";
}

void LogSumExp::add(double x) noexcept {
  if (x <= max_) {
    scaled_sum_ += std::exp(x - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  }
}

double LogSumExp::value() const noexcept { return max_ + std::log(scaled_sum_); }

namespace {

void check_theta(const PairwiseModel& m, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != m.graph().edge_count())
    throw Error(Errc::invalid_argument, "theta length differs from edge count");
  for (double t : theta)
    if (!std::isfinite(t) || t < 0.0) throw Error(Errc::negative_weight, "theta must be finite and >= 0");
}

std::uint64_t checked_power(int base, int exponent, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    if (total > cap / static_cast<std::uint64_t>(base)) return cap + 1;
    total *= static_cast<std::uint64_t>(base);
  }
  return total;
}

// Brute force over a vertex subset (all vertices when `vertices` is empty
// and `count` equals N) using only edges in `edges`.
double enumerate_configurations(const PairwiseModel& m, std::span<const double> theta, int count,
                                std::span<const int> local_u, std::span<const int> local_v,
                                std::span<const EdgeId> edges) {
  const int q = m.alphabet_size();
  struct Term {
    int u, v;
    std::vector<double> table;
  };
  std::vector<Term> terms;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double t = theta[static_cast<std::size_t>(edges[k])];
    if (t == 0.0) continue;
    std::vector<double> table(m.potentials()[static_cast<std::size_t>(edges[k])]);
    for (double& x : table) x *= t;
    terms.push_back({local_u[k], local_v[k], std::move(table)});
  }
  if (terms.empty()) return count * std::log(static_cast<double>(q));

  std::vector<int> x(static_cast<std::size_t>(count), 0);
  LogSumExp acc;
  while (true) {
    double energy = 0.0;
    for (const Term& term : terms)
      energy += term.table[static_cast<std::size_t>(x[static_cast<std::size_t>(term.u)] * q +
                                                    x[static_cast<std::size_t>(term.v)])];
    acc.add(energy);
    int i = 0;
    while (i < count && ++x[static_cast<std::size_t>(i)] == q) x[static_cast<std::size_t>(i++)] = 0;
    if (i == count) break;
  }
  return acc.value();
}

}  // namespace

LogPartitionValue phi_brute_force(const PairwiseModel& m, const Caps& caps) {
  return phi_brute_force(m, m.theta(), caps);
}

LogPartitionValue phi_brute_force(const PairwiseModel& m, std::span<const double> theta, const Caps& caps) {
  check_theta(m, theta);
  const Graph& g = m.graph();
  if (checked_power(m.alphabet_size(), g.node_count(), caps.configurations) > caps.configurations)
    throw Error(Errc::cap_exceeded, "q^N exceeds the brute-force configuration cap");
  std::vector<int> us, vs;
  std::vector<EdgeId> ids;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    us.push_back(g.edge(e).u);
    vs.push_back(g.edge(e).v);
    ids.push_back(e);
  }
  return {enumerate_configurations(m, theta, g.node_count(), us, vs, ids), PhiMethod::brute_force};
}

LogPartitionValue phi_tree(const PairwiseModel& m) { return phi_tree(m, std::span<const double>(m.theta())); }

LogPartitionValue phi_tree(const PairwiseModel& m, const SpanningTree& support) {
  std::vector<double> masked(m.theta().size(), 0.0);
  for (EdgeId e : support.edges()) {
    if (e < 0 || e >= m.graph().edge_count()) throw Error(Errc::invalid_argument, "support edge out of range");
    masked[static_cast<std::size_t>(e)] = m.theta()[static_cast<std::size_t>(e)];
  }
  return phi_tree(m, std::span<const double>(masked));
}

LogPartitionValue phi_tree(const PairwiseModel& m, std::span<const double> theta) {
  check_theta(m, theta);
  const Graph& g = m.graph();
  const int n = g.node_count();
  const int q = m.alphabet_size();
  const auto qs = static_cast<std::size_t>(q);

  DisjointSets dsu(n);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (theta[static_cast<std::size_t>(e)] != 0.0 && !dsu.unite(g.edge(e).u, g.edge(e).v))
      throw Error(Errc::cycle_in_support, "edges with non-zero weight contain a cycle");

  auto active = [&](const Incidence& inc) { return theta[static_cast<std::size_t>(inc.edge)] != 0.0; };

  // incoming[v][x]: sum of log-messages from v's children evaluated at x_v.
  std::vector<double> incoming(static_cast<std::size_t>(n) * qs, 0.0);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
  std::vector<EdgeId> parent_edge(static_cast<std::size_t>(n), -1);
  std::vector<Vertex> order;
  std::vector<double> terms(qs);

  double phi = 0.0;
  for (Vertex root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    order.clear();
    order.push_back(root);
    seen[static_cast<std::size_t>(root)] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      Vertex x = order[i];
      for (const Incidence& inc : g.incident(x)) {
        if (!active(inc) || seen[static_cast<std::size_t>(inc.neighbor)]) continue;
        seen[static_cast<std::size_t>(inc.neighbor)] = 1;
        parent[static_cast<std::size_t>(inc.neighbor)] = x;
        parent_edge[static_cast<std::size_t>(inc.neighbor)] = inc.edge;
        order.push_back(inc.neighbor);
      }
    }
    // Leaves to root.
    for (std::size_t i = order.size(); i-- > 1;) {
      const Vertex child = order[i];
      const Vertex par = parent[static_cast<std::size_t>(child)];
      const EdgeId e = parent_edge[static_cast<std::size_t>(child)];
      const double t = theta[static_cast<std::size_t>(e)];
      const bool parent_is_row = g.edge(e).u == par;
      const double* child_in = &incoming[static_cast<std::size_t>(child) * qs];
      double* par_in = &incoming[static_cast<std::size_t>(par) * qs];
      for (int xp = 0; xp < q; ++xp) {
        double best = -std::numeric_limits<double>::infinity();
        for (int xc = 0; xc < q; ++xc) {
          const double pot = parent_is_row ? m.potential(e, xp, xc) : m.potential(e, xc, xp);
          terms[static_cast<std::size_t>(xc)] = t * pot + child_in[xc];
          best = std::max(best, terms[static_cast<std::size_t>(xc)]);
        }
        double s = 0.0;
        for (double v : terms) s += std::exp(v - best);
        par_in[xp] += best + std::log(s);
      }
    }
    const double* root_in = &incoming[static_cast<std::size_t>(root) * qs];
    LogSumExp acc;
    for (int x = 0; x < q; ++x) acc.add(root_in[x]);
    phi += acc.value();
  }
  return {phi, PhiMethod::tree_sum_product};
}

void validate_partition(const Graph& g, const VertexPartition& blocks) {
  std::vector<int> hits(static_cast<std::size_t>(g.node_count()), 0);
  for (const auto& block : blocks) {
    if (block.empty()) throw Error(Errc::invalid_argument, "partition has an empty block");
    for (Vertex v : block) {
      if (v < 0 || v >= g.node_count()) throw Error(Errc::invalid_argument, "partition vertex out of range");
      ++hits[static_cast<std::size_t>(v)];
    }
  }
  for (int h : hits)
    if (h != 1) throw Error(Errc::invalid_argument, "blocks do not partition the vertex set");
}

LogPartitionValue phi_components(const PairwiseModel& m, const VertexPartition& blocks, const Caps& caps) {
  return phi_components(m, m.theta(), blocks, caps);
}

LogPartitionValue phi_components(const PairwiseModel& m, std::span<const double> theta, const VertexPartition& blocks,
                                 const Caps& caps) {
  check_theta(m, theta);
  const Graph& g = m.graph();
  validate_partition(g, blocks);
  std::vector<int> block_of(static_cast<std::size_t>(g.node_count()));
  std::vector<int> local(static_cast<std::size_t>(g.node_count()));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (static_cast<int>(block.size()) > caps.block_size ||
        checked_power(m.alphabet_size(), static_cast<int>(block.size()), caps.configurations) > caps.configurations)
      throw Error(Errc::cap_exceeded, "block of size " + std::to_string(block.size()) + " exceeds the block cap");
    for (std::size_t i = 0; i < block.size(); ++i) {
      block_of[static_cast<std::size_t>(block[i])] = static_cast<int>(b);
      local[static_cast<std::size_t>(block[i])] = static_cast<int>(i);
    }
  }
  std::vector<std::vector<EdgeId>> inner(blocks.size());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (block_of[static_cast<std::size_t>(ed.u)] == block_of[static_cast<std::size_t>(ed.v)])
      inner[static_cast<std::size_t>(block_of[static_cast<std::size_t>(ed.u)])].push_back(e);
  }
  double phi = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::vector<int> us, vs;
    for (EdgeId e : inner[b]) {
      us.push_back(local[static_cast<std::size_t>(g.edge(e).u)]);
      vs.push_back(local[static_cast<std::size_t>(g.edge(e).v)]);
    }
    phi += enumerate_configurations(m, theta, static_cast<int>(blocks[b].size()), us, vs, inner[b]);
  }
  return {phi, PhiMethod::component_product};
}

double kirchhoff_tree_count(const Graph& g) {
  const int n = g.node_count() - 1;
  if (n <= 0) return 1.0;
  // Reduced Laplacian with vertex 0 removed.
  std::vector<long double> a(static_cast<std::size_t>(n * n), 0.0L);
  auto at = [&](int r, int c) -> long double& { return a[static_cast<std::size_t>(r * n + c)]; };
  for (const Edge& e : g.edges()) {
    const int u = e.u - 1, v = e.v - 1;
    if (u >= 0) at(u, u) += 1.0L;
    if (v >= 0) at(v, v) += 1.0L;
    if (u >= 0 && v >= 0) {
      at(u, v) -= 1.0L;
      at(v, u) -= 1.0L;
    }
  }
  long double det = 1.0L;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(at(r, col)) > std::fabs(at(pivot, col))) pivot = r;
    if (std::fabs(at(pivot, col)) < 1e-12L) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(at(pivot, c), at(col, c));
      det = -det;
    }
    det *= at(col, col);
    for (int r = col + 1; r < n; ++r) {
      const long double f = at(r, col) / at(col, col);
      if (f == 0.0L) continue;
      for (int c = col; c < n; ++c) at(r, c) -= f * at(col, c);
    }
  }
  return static_cast<double>(std::round(det));
}

namespace {

class TreeEnumerator {
 public:
  TreeEnumerator(const Graph& g, std::vector<SpanningTree>& out) : g_(g), dsu_(g.node_count()), out_(out) {}

  void run() { visit(0); }

 private:
  void visit(EdgeId next) {
    if (static_cast<int>(chosen_.size()) == g_.node_count() - 1) {
      out_.emplace_back(g_, chosen_);
      return;
    }
    if (next == g_.edge_count()) return;
    const Edge& e = g_.edge(next);
    const auto mark = dsu_.checkpoint();
    if (dsu_.unite(e.u, e.v)) {
      chosen_.push_back(next);
      visit(next + 1);
      chosen_.pop_back();
      dsu_.rollback(mark);
    }
    if (still_spannable(next + 1)) visit(next + 1);
  }

  // Whether chosen edges plus edges from `from` onwards still connect the graph.
  bool still_spannable(EdgeId from) const {
    UndoableDisjointSets probe = dsu_;
    for (EdgeId e = from; e < g_.edge_count() && probe.components() > 1; ++e)
      probe.unite(g_.edge(e).u, g_.edge(e).v);
    return probe.components() == 1;
  }

  const Graph& g_;
  UndoableDisjointSets dsu_;
  std::vector<EdgeId> chosen_;
  std::vector<SpanningTree>& out_;
};

}  // namespace

TreeEnumeration enumerate_spanning_trees(const Graph& g, const Caps& caps) {
  g.require_connected("enumerate_spanning_trees");
  const double expected = kirchhoff_tree_count(g);
  if (expected > static_cast<double>(caps.spanning_trees))
    throw Error(Errc::cap_exceeded, "graph has more spanning trees than the enumeration cap");
  TreeEnumeration result;
  result.trees.reserve(static_cast<std::size_t>(expected));
  TreeEnumerator(g, result.trees).run();
  result.count = result.trees.size();
  return result;
}

WeightedTree max_weight_spanning_tree(const Graph& g, std::span<const double> w) {
  g.require_connected("max_weight_spanning_tree");
  if (static_cast<int>(w.size()) != g.edge_count())
    throw Error(Errc::invalid_argument, "weight vector length differs from edge count");
  for (double x : w)
    if (!std::isfinite(x)) throw Error(Errc::invalid_argument, "weights must be finite");
  std::vector<EdgeId> order(static_cast<std::size_t>(g.edge_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return w[static_cast<std::size_t>(a)] > w[static_cast<std::size_t>(b)];
  });
  DisjointSets dsu(g.node_count());
  std::vector<EdgeId> picked;
  picked.reserve(static_cast<std::size_t>(g.node_count() - 1));
  for (EdgeId e : order) {
    if (dsu.unite(g.edge(e).u, g.edge(e).v)) picked.push_back(e);
    if (static_cast<int>(picked.size()) == g.node_count() - 1) break;
  }
  SpanningTree tree(g, std::move(picked));
  double total = 0.0;
  for (EdgeId e : tree.edges()) total += w[static_cast<std::size_t>(e)];
  return {std::move(tree), total};
}

}  // namespace logpart
