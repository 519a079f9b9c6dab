#include "logpart/ust.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "logpart/error.hpp"
#include "logpart/parallel.hpp"
#include "logpart/random.hpp"

namespace logpart {

SpanningTree aldous_broder(const Graph& g, std::mt19937_64& rng, std::uint64_t step_limit) {
  const int n = g.node_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<EdgeId> edges;
  edges.reserve(static_cast<std::size_t>(std::max(n - 1, 0)));
  auto at = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)));
  seen[static_cast<std::size_t>(at)] = 1;
  std::uint64_t steps = 0;
  while (static_cast<int>(edges.size()) < n - 1) {
    if (++steps > step_limit)
      throw Error(Errc::invariant_violation, "random walk did not cover the graph within the step guard");
    const auto inc = g.incident(at);
    const Incidence& next = inc[uniform_below(rng, inc.size())];
    if (!seen[static_cast<std::size_t>(next.neighbor)]) {
      seen[static_cast<std::size_t>(next.neighbor)] = 1;
      edges.push_back(next.edge);
    }
    at = next.neighbor;
  }
  return SpanningTree(g, std::move(edges));
}

SampleBatch sample_ust(const Graph& g, std::int64_t n, std::uint64_t seed, int threads) {
  g.require_connected("sample_ust");
  if (n < 1) throw Error(Errc::invalid_argument, "sample count must be >= 1");
  const std::uint64_t limit = 10'000ULL * static_cast<std::uint64_t>(g.node_count()) *
                              std::max<std::uint64_t>(1, static_cast<std::uint64_t>(g.edge_count()));
  std::vector<std::optional<SpanningTree>> drawn(static_cast<std::size_t>(n));
  parallel_for(drawn.size(), threads, [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    drawn[i] = aldous_broder(g, rng, limit);
  });

  SampleBatch batch;
  batch.seed = seed;
  batch.n = n;
  batch.edge_counts.assign(static_cast<std::size_t>(g.edge_count()), 0);
  batch.trees.reserve(drawn.size());
  for (auto& t : drawn) {
    for (EdgeId e : t->edges()) ++batch.edge_counts[static_cast<std::size_t>(e)];
    batch.trees.push_back(std::move(*t));
  }
  batch.empirical_marginals.reserve(batch.edge_counts.size());
  for (auto c : batch.edge_counts)
    batch.empirical_marginals.push_back(static_cast<double>(c) / static_cast<double>(n));
  return batch;
}

std::string format_sample_batch(const SampleBatch& batch) {
  std::string out;
  for (const auto& t : batch.trees) {
    out += "tree";
    for (EdgeId e : t.edges()) out += " " + std::to_string(e);
    out += "\n";
  }
  return out;
}

namespace {

constexpr int kDenseLimit = 2000;

// Vertex 0 is grounded; vertex v > 0 maps to row v - 1.
Eigen::VectorXd unit_injection(int rows, const Edge& e) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  if (e.u > 0) b(e.u - 1) += 1.0;
  if (e.v > 0) b(e.v - 1) -= 1.0;
  return b;
}

double potential_drop(const Eigen::VectorXd& x, const Edge& e) {
  const double pu = e.u > 0 ? x(e.u - 1) : 0.0;
  const double pv = e.v > 0 ? x(e.v - 1) : 0.0;
  return pu - pv;
}

}  // namespace

ResistanceProfile effective_resistance(const Graph& g, int threads, LaplacianSolver solver) {
  g.require_connected("effective_resistance");
  ResistanceProfile out;
  const int rows = g.node_count() - 1;
  out.u.assign(static_cast<std::size_t>(g.edge_count()), 0.0);
  if (g.edge_count() == 0) return out;

  auto finish = [&](double raw) {
    if (!std::isfinite(raw) || raw <= 0.0)
      throw Error(Errc::solver_failure, "Laplacian solve produced a non-positive resistance");
    return std::min(raw, 1.0);  // rounding can push bridges past 1
  };

  const bool dense = solver == LaplacianSolver::dense || (solver == LaplacianSolver::automatic && rows <= kDenseLimit);
  if (dense) {
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(rows, rows);
    for (const Edge& e : g.edges()) {
      if (e.u > 0) lap(e.u - 1, e.u - 1) += 1.0;
      if (e.v > 0) lap(e.v - 1, e.v - 1) += 1.0;
      if (e.u > 0 && e.v > 0) {
        lap(e.u - 1, e.v - 1) -= 1.0;
        lap(e.v - 1, e.u - 1) -= 1.0;
      }
    }
    const Eigen::LLT<Eigen::MatrixXd> chol(lap);
    if (chol.info() != Eigen::Success) throw Error(Errc::solver_failure, "grounded Laplacian is not positive definite");
    parallel_for(out.u.size(), threads, [&](std::size_t i) {
      const Edge& e = g.edge(static_cast<EdgeId>(i));
      out.u[i] = finish(potential_drop(chol.solve(unit_injection(rows, e)), e));
    });
  } else {
    std::vector<Eigen::Triplet<double>> entries;
    for (const Edge& e : g.edges()) {
      if (e.u > 0) entries.emplace_back(e.u - 1, e.u - 1, 1.0);
      if (e.v > 0) entries.emplace_back(e.v - 1, e.v - 1, 1.0);
      if (e.u > 0 && e.v > 0) {
        entries.emplace_back(e.u - 1, e.v - 1, -1.0);
        entries.emplace_back(e.v - 1, e.u - 1, -1.0);
      }
    }
    Eigen::SparseMatrix<double> lap(rows, rows);
    lap.setFromTriplets(entries.begin(), entries.end());
    using Solver = Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                            Eigen::DiagonalPreconditioner<double>>;
    Solver cg;
    cg.setTolerance(1e-10);
    cg.setMaxIterations(std::max(10 * rows, 1000));
    cg.compute(lap);
    parallel_for(out.u.size(), threads, [&](std::size_t i) {
      const Edge& e = g.edge(static_cast<EdgeId>(i));
      const Eigen::VectorXd x = cg.solve(unit_injection(rows, e));
      if (cg.info() != Eigen::Success) throw Error(Errc::solver_failure, "conjugate gradient did not converge");
      out.u[i] = finish(potential_drop(x, e));
    });
  }
  out.kappa_u = *std::min_element(out.u.begin(), out.u.end());
  return out;
}

ResistanceBounds resistance_bounds_structural(const Graph& g) {
  ResistanceBounds out;
  out.degree_bound = std::min(1.0, 2.0 / (g.max_degree() + 1.0));
  if (const auto gl = girth(g); gl && *gl > 3) {
    const double span = *gl - 1.0;
    out.girth_bound = 1.0 / (1.0 + g.edge_count() / (span * span));
  }
  return out;
}

std::int64_t sample_size_for(double epsilon, double delta, const Graph& g, double kappa_u_lower) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1/2]");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::invalid_argument, "delta must lie in (0, 1)");
  if (!(kappa_u_lower > 0.0 && kappa_u_lower <= 1.0))
    throw Error(Errc::invalid_argument, "kappa_u lower bound must lie in (0, 1]");
  const double top = std::log((2.0 * g.edge_count() + 4.0) / delta);
  const double n = std::ceil(top / (2.0 * kappa_u_lower * kappa_u_lower * epsilon * epsilon));
  if (!(n < 9.0e15)) throw Error(Errc::cap_exceeded, "required sample size is too large");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

}  // namespace logpart
