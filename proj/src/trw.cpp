#include "logpart/trw.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "logpart/error.hpp"
#include "logpart/generators.hpp"
#include "logpart/parallel.hpp"
#include "logpart/ust.hpp"

namespace logpart {

const char* to_string(EstimateMethod method) noexcept {
  switch (method) {
    case EstimateMethod::trw_prime: return "trwp";
    case EstimateMethod::uniform_sampled: return "uniform";
    case EstimateMethod::partition: return "partition";
  }
  return "unknown";
}

EstimateReport make_report(double L, double U, double kappa_used, EstimateMethod method) {
  if (!(kappa_used > 0.0 && kappa_used <= 1.0))
    throw Error(Errc::invariant_violation, "coverage level must lie in (0, 1]");
  EstimateReport r;
  r.L = L;
  r.U = U;
  r.phi_hat = std::sqrt(L * U);
  r.kappa_used = kappa_used;
  r.ratio_lo = std::sqrt(kappa_used);
  r.ratio_hi = 1.0 / r.ratio_lo;
  r.method = method;
  if (L > U + 1e-9) throw Error(Errc::invariant_violation, "lower bound exceeds upper bound");
  return r;
}

std::string serialize_report(const EstimateReport& r) {
  std::string out;
  out += "L " + format_real(r.L) + "\n";
  out += "U " + format_real(r.U) + "\n";
  out += "phi_hat " + format_real(r.phi_hat) + "\n";
  out += "kappa " + format_real(r.kappa_used) + "\n";
  out += "ratio_lo " + format_real(r.ratio_lo) + "\n";
  out += "ratio_hi " + format_real(r.ratio_hi) + "\n";
  out += std::string("method ") + to_string(r.method) + "\n";
  if (r.n_samples) out += "n " + std::to_string(*r.n_samples) + "\n";
  if (r.seed) out += "seed " + std::to_string(*r.seed) + "\n";
  return out;
}

namespace {

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

[[noreturn]] void uncovered(const Graph& g, EdgeId e) {
  const Edge& ed = g.edge(e);
  throw Error(Errc::edge_uncovered, "edge " + std::to_string(e) + " (" + std::to_string(ed.u) + "," +
                                        std::to_string(ed.v) + ") has positive weight but zero coverage");
}

void require_coverage(const PairwiseModel& m, std::span<const double> coverage) {
  for (EdgeId e = 0; e < m.graph().edge_count(); ++e)
    if (m.theta()[static_cast<std::size_t>(e)] > 0.0 && !(coverage[static_cast<std::size_t>(e)] > 0.0))
      uncovered(m.graph(), e);
}

}  // namespace

double weighted_coverage(std::span<const double> theta, std::span<const double> coverage) {
  double least = 1.0;
  for (std::size_t e = 0; e < theta.size(); ++e)
    if (theta[e] > 0.0) least = std::min(least, coverage[e]);
  return least;
}

LowerUpper lower_upper(const PairwiseModel& m, const TreeDistribution& rho, int threads) {
  const auto& theta = m.theta();
  const auto edge_total = theta.size();
  if (rho.edge_marginals.size() != edge_total)
    throw Error(Errc::invalid_argument, "tree distribution belongs to a different graph");
  require_coverage(m, rho.edge_marginals);

  std::vector<double> lower_terms(rho.support.size()), upper_terms(rho.support.size());
  parallel_for(rho.support.size(), threads, [&](std::size_t i) {
    const auto& item = rho.support[i];
    std::vector<double> on_tree(edge_total, 0.0), scaled(edge_total, 0.0);
    for (EdgeId e : item.tree.edges()) {
      const auto k = static_cast<std::size_t>(e);
      on_tree[k] = theta[k];
      scaled[k] = theta[k] > 0.0 ? theta[k] / rho.edge_marginals[k] : 0.0;
    }
    lower_terms[i] = item.probability * phi_tree(m, on_tree).phi;
    upper_terms[i] = item.probability * phi_tree(m, scaled).phi;
  });
  return {pairwise_sum(lower_terms), pairwise_sum(upper_terms)};
}

const TreeDistribution* CoveringCache::find(const Graph& g) const {
  for (const auto& [graph, rho] : entries_)
    if (graph == g) return &rho;
  return nullptr;
}

const TreeDistribution& CoveringCache::insert(const Graph& g, TreeDistribution rho) {
  entries_.emplace_back(g, std::move(rho));
  return entries_.back().second;
}

TreeDistribution optimal_covering(const Graph& g, const TrwOptions& options) {
  g.require_connected("optimal_covering");
  if (g.edge_count() == 0) return point_mass(g, SpanningTree(g, {}));
  if (g.node_count() <= options.caps.subset_nodes && g.node_count() <= 62) return kappa_exact(g, options.caps).primal;
  return balanced_covering(g, options.max_rounds, options.tol).distribution;
}

EstimateReport estimate_trw_prime(const PairwiseModel& m, const TrwOptions& options, CoveringCache* cache) {
  const Graph& g = m.graph();
  g.require_connected("estimate_trw_prime");
  const TreeDistribution* rho = cache ? cache->find(g) : nullptr;
  TreeDistribution local;
  if (!rho) {
    local = optimal_covering(g, options);
    rho = cache ? &cache->insert(g, std::move(local)) : &local;
  }
  const auto [L, U] = lower_upper(m, *rho, options.threads);
  return make_report(L, U, weighted_coverage(m.theta(), rho->edge_marginals), EstimateMethod::trw_prime);
}

TreeDistribution empirical_distribution(const Graph& g, const std::vector<SpanningTree>& trees) {
  std::vector<WeightedSpanningTree> weighted;
  weighted.reserve(trees.size());
  const double share = 1.0 / static_cast<double>(trees.size());
  for (const auto& t : trees) weighted.push_back({t, share});
  TreeDistribution rho = make_tree_distribution(g, std::move(weighted));
  // Recount so the marginals are exactly count / n.
  std::vector<std::int64_t> counts(static_cast<std::size_t>(g.edge_count()), 0);
  for (const auto& t : trees)
    for (EdgeId e : t.edges()) ++counts[static_cast<std::size_t>(e)];
  for (std::size_t e = 0; e < counts.size(); ++e)
    rho.edge_marginals[e] = static_cast<double>(counts[e]) / static_cast<double>(trees.size());
  return rho;
}

EstimateReport estimate_uniform_sampled(const PairwiseModel& m, double epsilon, double delta, std::uint64_t seed,
                                        int threads) {
  const Graph& g = m.graph();
  g.require_connected("estimate_uniform_sampled");
  const double kappa_u = effective_resistance(g, threads).kappa_u;
  std::int64_t n = sample_size_for(epsilon, delta, g, kappa_u);
  constexpr int kRetries = 3;
  for (int attempt = 0;; ++attempt, n *= 2) {
    const SampleBatch batch = sample_ust(g, n, seed, threads);
    const TreeDistribution rho = empirical_distribution(g, batch.trees);
    const double least = weighted_coverage(m.theta(), rho.edge_marginals);
    if (least <= 0.0 && attempt < kRetries) continue;
    const auto [L, U] = lower_upper(m, rho, threads);
    EstimateReport r = make_report(L, U, least, EstimateMethod::uniform_sampled);
    r.n_samples = n;
    r.seed = seed;
    return r;
  }
}

namespace {

void canonicalize(VertexPartition& blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
}

std::vector<int> block_of(const Graph& g, const VertexPartition& blocks) {
  std::vector<int> owner(static_cast<std::size_t>(g.node_count()), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (Vertex v : blocks[b]) owner[static_cast<std::size_t>(v)] = static_cast<int>(b);
  return owner;
}

}  // namespace

PartitionDistribution make_partition_distribution(const Graph& g, std::vector<WeightedPartition> support, int k) {
  if (k < 1) throw Error(Errc::invalid_argument, "block cap must be >= 1");
  double total = 0.0;
  for (auto& item : support) {
    validate_partition(g, item.blocks);
    canonicalize(item.blocks);
    if (!std::isfinite(item.probability) || item.probability < 0.0)
      throw Error(Errc::invalid_argument, "partition probabilities must be finite and >= 0");
    for (const auto& b : item.blocks)
      if (static_cast<int>(b.size()) > k)
        throw Error(Errc::invalid_argument, "block of size " + std::to_string(b.size()) + " exceeds k");
    total += item.probability;
  }
  if (std::abs(total - 1.0) > 1e-10) throw Error(Errc::invalid_argument, "partition probabilities must sum to 1");
  std::stable_sort(support.begin(), support.end(),
                   [](const WeightedPartition& a, const WeightedPartition& b) { return a.blocks < b.blocks; });

  PartitionDistribution pd;
  pd.k = k;
  for (auto& item : support) {
    if (item.probability == 0.0) continue;
    if (!pd.support.empty() && pd.support.back().blocks == item.blocks)
      pd.support.back().probability += item.probability;
    else
      pd.support.push_back(std::move(item));
  }
  pd.edge_coverage.assign(static_cast<std::size_t>(g.edge_count()), 0.0);
  for (const auto& item : pd.support) {
    const auto owner = block_of(g, item.blocks);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (owner[static_cast<std::size_t>(g.edge(e).u)] == owner[static_cast<std::size_t>(g.edge(e).v)])
        pd.edge_coverage[static_cast<std::size_t>(e)] += item.probability;
  }
  double least = 1.0;
  for (double c : pd.edge_coverage) least = std::min(least, c);
  pd.epsilon = std::max(0.0, 1.0 - least);
  return pd;
}

PartitionDistribution shifted_grid_partitions(int width, int height, int b) {
  if (b < 2) throw Error(Errc::invalid_argument, "block side must be >= 2");
  if (width < 1 || height < 1) throw Error(Errc::invalid_argument, "grid dimensions must be positive");
  FamilyParams params;
  params.width = width;
  params.height = height;
  const Graph g = generate_graph(GraphFamily::grid, params);
  auto tile = [b](int index, int length, int shift) { return length <= b ? 0 : (index + shift) / b; };
  std::vector<WeightedPartition> support;
  const double share = 1.0 / (static_cast<double>(b) * b);
  for (int sy = 0; sy < b; ++sy) {
    for (int sx = 0; sx < b; ++sx) {
      std::map<std::pair<int, int>, std::vector<Vertex>> tiles;
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
          tiles[{tile(r, height, sy), tile(c, width, sx)}].push_back(grid_vertex(width, r, c));
      VertexPartition blocks;
      for (auto& [key, members] : tiles) blocks.push_back(std::move(members));
      support.push_back({std::move(blocks), share});
    }
  }
  return make_partition_distribution(g, std::move(support), b * b);
}

PartitionDistribution parse_partition_distribution(const Graph& g, std::string_view text, int k) {
  std::vector<WeightedPartition> support;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "partition") {
      std::string tok, extra;
      double p = 0.0;
      if (!(ls >> tok) || (ls >> extra)) throw Error(Errc::malformed_input, "expected `partition <prob>`", line);
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), p);
      if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw Error(Errc::malformed_input, "bad probability '" + tok + "'", line);
      support.push_back({{}, p});
    } else if (key == "block") {
      if (support.empty()) throw Error(Errc::malformed_input, "block before any partition line", line);
      std::vector<Vertex> members;
      for (std::string tok; ls >> tok;) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
          throw Error(Errc::malformed_input, "bad vertex '" + tok + "'", line);
        members.push_back(v);
      }
      if (members.empty()) throw Error(Errc::malformed_input, "empty block", line);
      support.back().blocks.push_back(std::move(members));
    } else {
      throw Error(Errc::malformed_input, "unknown keyword '" + key + "'", line);
    }
  }
  if (support.empty()) throw Error(Errc::malformed_input, "no partitions given");
  return make_partition_distribution(g, std::move(support), k);
}

std::string format_partition_distribution(const PartitionDistribution& pd) {
  std::string out;
  for (const auto& item : pd.support) {
    out += "partition " + format_real(item.probability) + "\n";
    for (const auto& b : item.blocks) {
      out += "block";
      for (Vertex v : b) out += " " + std::to_string(v);
      out += "\n";
    }
  }
  return out;
}

EstimateReport estimate_partition(const PairwiseModel& m, const PartitionDistribution& pd, const Caps& caps,
                                  int threads) {
  const Graph& g = m.graph();
  if (pd.edge_coverage.size() != static_cast<std::size_t>(g.edge_count()))
    throw Error(Errc::invalid_argument, "partition distribution belongs to a different graph");
  require_coverage(m, pd.edge_coverage);
  for (const auto& item : pd.support)
    for (const auto& b : item.blocks)
      if (static_cast<int>(b.size()) > caps.block_size)
        throw Error(Errc::cap_exceeded, "block of size " + std::to_string(b.size()) + " exceeds the block cap");

  const auto& theta = m.theta();
  std::vector<double> scaled(theta.size(), 0.0);
  for (std::size_t e = 0; e < theta.size(); ++e)
    scaled[e] = theta[e] > 0.0 ? theta[e] / pd.edge_coverage[e] : 0.0;

  std::vector<double> lower_terms(pd.support.size()), upper_terms(pd.support.size());
  parallel_for(pd.support.size(), threads, [&](std::size_t i) {
    const auto& item = pd.support[i];
    lower_terms[i] = item.probability * phi_components(m, theta, item.blocks, caps).phi;
    upper_terms[i] = item.probability * phi_components(m, scaled, item.blocks, caps).phi;
  });
  return make_report(pairwise_sum(lower_terms), pairwise_sum(upper_terms),
                     weighted_coverage(theta, pd.edge_coverage), EstimateMethod::partition);
}

MaxcutBracket maxcut_bracket(const Graph& g, double beta, const TrwOptions& options) {
  g.require_connected("maxcut_bracket");
  if (!std::isfinite(beta)) throw Error(Errc::invalid_argument, "beta must be finite");
  if (beta <= 0.0) beta = 10.0 * g.node_count() * std::log(2.0);
  const PairwiseModel m = uniform_model(g, 2, beta, disagreement_table(2));
  MaxcutBracket out;
  out.beta = beta;
  out.report = estimate_trw_prime(m, options);
  out.lower = (out.report.phi_hat / out.report.ratio_hi - g.node_count() * std::log(2.0)) / beta;
  out.upper = out.report.phi_hat * out.report.ratio_hi / beta;
  return out;
}

int maxcut_brute_force(const Graph& g) {
  if (g.node_count() > 30) throw Error(Errc::cap_exceeded, "brute-force max cut limited to 30 vertices");
  if (g.node_count() <= 1) return 0;
  int best = 0;
  // Vertex N-1 stays on side 0; every cut is seen once.
  const std::uint64_t total = std::uint64_t{1} << (g.node_count() - 1);
  for (std::uint64_t side = 0; side < total; ++side) {
    int cut = 0;
    for (const Edge& e : g.edges()) cut += static_cast<int>(((side >> e.u) ^ (side >> e.v)) & 1U);
    best = std::max(best, cut);
  }
  return best;
}

}  // namespace logpart
