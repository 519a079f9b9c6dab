#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logpart/exact.hpp"
#include "logpart/graph.hpp"
#include "logpart/rational.hpp"

namespace logpart {

struct WeightedSpanningTree {
  SpanningTree tree;
  double probability = 0.0;
};

/// Finitely supported distribution over spanning trees of one graph, with the
/// edge marginals it induces. Support is sorted by tree and duplicate-free.
struct TreeDistribution {
  std::vector<WeightedSpanningTree> support;
  std::vector<double> edge_marginals;
};

/// Merges duplicate trees, drops zero-probability entries and computes the
/// marginals. Throws unless the probabilities are positive and sum to one.
TreeDistribution make_tree_distribution(const Graph& g, std::vector<WeightedSpanningTree> weighted);

/// Point mass on a single tree.
TreeDistribution point_mass(const Graph& g, const SpanningTree& tree);

/// min_e rho_e.
double min_marginal(const TreeDistribution& rho);

/// Empty when every invariant holds; otherwise one message per violation.
/// The rank (Edmonds) constraints are checked only when N <= caps.subset_nodes.
std::vector<std::string> tree_distribution_violations(const Graph& g, const TreeDistribution& rho,
                                                      const Caps& caps = {});

struct KappaCertificate {
  Rational kappa;
  TreeDistribution primal;
  std::vector<Vertex> dual_S;
  WeightVector dual_w;
  double gap = 0.0;  // kappa - min_e primal marginal, clamped at zero
};

/// Exact kappa(G) = min_S (|S|-1)/|E(S)| by subset enumeration, with an
/// optimal tree distribution and the uniform dual on E(S*).
KappaCertificate kappa_exact(const Graph& g, const Caps& caps = {});

/// min over non-empty edge sets F of (|V(F)| - c(F)) / |F|. Test oracle.
Rational kappa_subgraph_form(const Graph& g, const Caps& caps = {});

/// Distribution whose least-covered edge has marginal exactly `kappa`:
/// copies every edge p times (kappa = p/q) and splits the multigraph into q
/// forests, each completed to a spanning tree.
TreeDistribution exact_balanced_covering(const Graph& g, Rational kappa);

struct BalancedCovering {
  TreeDistribution distribution;
  double lower = 0.0;  // min_e rho_e of `distribution`
  double upper = 1.0;  // max spanning tree weight under `dual_w`
  WeightVector dual_w;
  std::int64_t rounds = 0;
};

/// Multiplicative weights on the edge player against max-weight spanning tree
/// best responses. Horizons double until upper - lower <= tol or the horizon
/// reaches `iterations`; lower <= kappa(G) <= upper always holds.
BalancedCovering balanced_covering(const Graph& g, std::int64_t iterations, double tol);

struct DualCertificate {
  WeightVector w;
  double value = 0.0;   // max spanning tree weight under w
  Rational exact_value; // (|V(E(S))| - c) / |E(S)|
};

DualCertificate dual_certificate(const Graph& g, std::span<const Vertex> subset);

struct StructuralKappaBounds {
  double mad_bound = 0.0;
  std::optional<double> girth_bound;
  Rational mad;          // exact, or an upper estimate when !mad_exact
  bool mad_exact = true;
  std::optional<int> girth;
};

/// Lower bounds on kappa(G) from maximum average degree and girth.
StructuralKappaBounds kappa_bounds_structural(const Graph& g, const Caps& caps = {});

/// Maximum average degree max_S 2|E(S)|/|S| by subset enumeration.
Rational max_average_degree(const Graph& g, const Caps& caps = {});

/// Certificate text: `kappa p/q`, `dual_S ...`, one `primal_tree <prob> <edges>` per tree.
std::string format_certificate(const KappaCertificate& cert);
/// Bracket certificate: `kappa_lower`, `kappa_upper`, `dual_w`, `primal_tree` lines.
std::string format_certificate(const BalancedCovering& covering);

struct CertificateCheck {
  std::vector<std::pair<std::string, bool>> checks;
  bool passed() const;
};

/// Re-derives every claim of a certificate against `g`.
CertificateCheck verify_certificate(const Graph& g, std::string_view text);

}  // namespace logpart
