// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "logpart/bench.hpp"
#include "logpart/error.hpp"
#include "logpart/exact.hpp"
#include "logpart/generators.hpp"
#include "logpart/kappa.hpp"
#include "logpart/trw.hpp"
#include "logpart/ust.hpp"
#include "support.hpp"

using namespace logpart;

namespace {

using Clock = std::chrono::steady_clock;

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const char* name, double budget, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = seconds_since(t0);
  if (secs > budget) out.fail("took " + std::to_string(secs) + " s, budget " + std::to_string(budget) + " s");
  if (!out.ok) ++failures;
  std::printf("%s %2d %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, name, secs, out.detail.empty() ? "" : ": ",
              out.detail.c_str());
  std::fflush(stdout);
}

std::vector<CorpusEntry> corpus() { return parse_corpus(kDefaultCorpus); }

}  // namespace

int main() {
  criterion(1, "kappa worked examples", 6.0, [] {
    Outcome out;
    auto expect = [&](const std::string& name, const Graph& g, Rational want) {
      const auto t0 = Clock::now();
      const Rational got = kappa_exact(g).kappa;
      if (got != want) out.fail(name + " gave " + got.str());
      if (seconds_since(t0) >= 1.0) out.fail(name + " slower than 1 s");
    };
    expect("triangle", oracle::complete(3), Rational(2, 3));
    expect("four-vertex dense subgraph", oracle::diamond(), Rational(3, 5));
    for (int n = 4; n <= 6; ++n) expect("K" + std::to_string(n), oracle::complete(n), Rational(2, n));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
      FamilyParams fp;
      fp.n = 2 + static_cast<int>(rng() % 14);
      expect("tree", generate_graph(GraphFamily::tree, fp, rng()), Rational(1));
    }
    expect("path", oracle::path(9), Rational(1));
    return out;
  });

  criterion(2, "edge-set and vertex-subset forms agree", 120.0, [] {
    Outcome out;
    Caps caps;
    caps.edge_subset = 24;  // the 4x4 grid has 24 edges
    std::vector<Graph> graphs;
    for (const auto& e : corpus()) graphs.push_back(e.graph);
    std::mt19937_64 rng(2);
    while (graphs.size() < corpus().size() + 200)
      graphs.push_back(oracle::random_connected(rng, 3 + static_cast<int>(rng() % 10), 20));
    for (const auto& g : graphs) {
      const Rational a = kappa_exact(g, caps).kappa;
      const Rational b = kappa_subgraph_form(g, caps);
      if (a != b) out.fail("mismatch " + a.str() + " vs " + b.str());
    }
    out.detail = std::to_string(graphs.size()) + " graphs";
    return out;
  });

  criterion(3, "multiplicative weights brackets kappa", 120.0, [] {
    Outcome out;
    double worst = 0.0;
    for (const auto& e : corpus()) {
      if (e.graph.node_count() > 12) continue;
      const auto t0 = Clock::now();
      const auto mw = balanced_covering(e.graph, std::int64_t{1} << 22, 1e-3);
      const double k = kappa_exact(e.graph).kappa.to_double();
      if (!(mw.lower <= k + 1e-12 && mw.upper >= k - 1e-12)) out.fail(e.id + " bracket misses kappa");
      if (mw.upper - mw.lower > 1e-3) out.fail(e.id + " gap " + std::to_string(mw.upper - mw.lower));
      const double secs = seconds_since(t0);
      if (secs >= 10.0) out.fail(e.id + " took " + std::to_string(secs) + " s");
      worst = std::max(worst, secs);
    }
    if (out.ok) out.detail = "slowest run " + std::to_string(worst) + " s";
    return out;
  });

  criterion(4, "sandwich and ratio on random models", 300.0, [] {
    Outcome out;
    std::mt19937_64 rng(4);
    const double tol = 1e-8;
    int distributions = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 8);
      const Graph g = oracle::random_connected(rng, n, n * (n - 1) / 2);
      ModelParams p;
      p.alphabet = 2 + static_cast<int>(rng() % 2);
      p.theta_max = 5.0;
      p.potential_max = 2.0;
      const PairwiseModel m = random_model(g, p, rng());
      const double phi = phi_brute_force(m).phi;

      std::vector<TreeDistribution> rhos{kappa_exact(g).primal};
      auto mw = balanced_covering(g, 1 + static_cast<std::int64_t>(rng() % 64), 0.0).distribution;
      if (min_marginal(mw) > 0.0) rhos.push_back(std::move(mw));
      for (const auto& rho : rhos) {
        ++distributions;
        const double k = weighted_coverage(m.theta(), rho.edge_marginals);
        const auto [L, U] = lower_upper(m, rho, threads());
        if (!(k * phi - tol <= L && L <= phi + tol && phi <= U + tol && U <= phi / k + tol))
          out.fail("sandwich broken on trial " + std::to_string(trial));
        if (U > L / k + tol) out.fail("U > L / kappa on trial " + std::to_string(trial));
        const EstimateReport r = make_report(L, U, k, EstimateMethod::trw_prime);
        const double ratio = r.phi_hat / phi;
        if (!(ratio >= std::sqrt(k) - tol && ratio <= 1 / std::sqrt(k) + tol))
          out.fail("ratio outside interval on trial " + std::to_string(trial));
      }
      const auto report = estimate_trw_prime(m);
      const double ratio = report.phi_hat / phi;
      const double k = kappa_exact(g).kappa.to_double();
      if (!(ratio >= std::sqrt(k) - tol && ratio <= 1 / std::sqrt(k) + tol))
        out.fail("estimate outside sqrt(kappa) interval on trial " + std::to_string(trial));
    }
    if (out.ok) out.detail = "200 models, " + std::to_string(distributions) + " distributions";
    return out;
  });

  criterion(5, "trees are exact", 60.0, [] {
    Outcome out;
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      FamilyParams fp;
      fp.n = 2 + static_cast<int>(rng() % 11);
      const Graph g = generate_graph(GraphFamily::tree, fp, rng());
      ModelParams p;
      p.alphabet = 2 + static_cast<int>(rng() % 2);
      p.theta_max = 5.0;
      p.potential_max = 2.0;
      const PairwiseModel m = random_model(g, p, rng());
      const double phi = phi_brute_force(m).phi;
      const double rel = std::abs(estimate_trw_prime(m).phi_hat - phi) / phi;
      worst = std::max(worst, rel);
      if (rel > 1e-9) out.fail("relative error " + std::to_string(rel));
    }
    if (out.ok) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "max relative error %.2e", worst);
      out.detail = buf;
    }
    return out;
  });

  criterion(6, "effective resistance equals tree marginals", 60.0, [] {
    Outcome out;
    std::vector<std::pair<std::string, Graph>> graphs{{"K4", oracle::complete(4)}};
    for (int n = 3; n <= 10; ++n) graphs.emplace_back("C" + std::to_string(n), oracle::cycle(n));
    for (const auto& e : corpus()) graphs.emplace_back(e.id, e.graph);
    int checked = 0;
    for (const auto& [name, g] : graphs) {
      if (kirchhoff_tree_count(g) > 1e5) continue;
      ++checked;
      const auto u = effective_resistance(g, threads()).u;
      const auto share = oracle::tree_marginals(g);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i] - share[i]) > 1e-8) out.fail(name + " edge " + std::to_string(i));
    }
    for (double x : effective_resistance(oracle::complete(3)).u)
      if (std::abs(x - 2.0 / 3) > 1e-8) out.fail("triangle");
    for (double x : effective_resistance(oracle::complete(4)).u)
      if (std::abs(x - 0.5) > 1e-8) out.fail("K4");
    for (int n = 3; n <= 10; ++n)
      for (double x : effective_resistance(oracle::cycle(n)).u)
        if (std::abs(x - (n - 1.0) / n) > 1e-8) out.fail("C" + std::to_string(n));
    if (out.ok) out.detail = std::to_string(checked) + " graphs with at most 1e5 trees";
    return out;
  });

  criterion(7, "structural bounds stay below kappa and kappa_u", 60.0, [] {
    Outcome out;
    for (const auto& e : corpus()) {
      const auto kb = kappa_bounds_structural(e.graph);
      const double k = kappa_exact(e.graph).kappa.to_double();
      if (kb.mad_bound > k + 1e-12) out.fail(e.id + " degree bound above kappa");
      if (kb.girth_bound && *kb.girth_bound > k + 1e-12) out.fail(e.id + " girth bound above kappa");
      const auto rb = resistance_bounds_structural(e.graph);
      const double ku = effective_resistance(e.graph).kappa_u;
      if (rb.degree_bound > ku + 1e-12) out.fail(e.id + " degree bound above kappa_u");
      if (rb.girth_bound && *rb.girth_bound > ku + 1e-12) out.fail(e.id + " girth bound above kappa_u");
    }
    // C6 by hand: 2 (1 - 1/6) / (1 + 6^(2/3)) and 1 / (1 + 6 / 25).
    const double by_hand = 2.0 * (5.0 / 6.0) / (1.0 + std::cbrt(36.0));
    const auto c6 = kappa_bounds_structural(oracle::cycle(6));
    if (!c6.girth_bound || std::abs(*c6.girth_bound - by_hand) > 1e-12) out.fail("C6 kappa girth bound");
    const auto c6u = resistance_bounds_structural(oracle::cycle(6));
    if (!c6u.girth_bound || std::abs(*c6u.girth_bound - 25.0 / 31.0) > 1e-12) out.fail("C6 kappa_u girth bound");
    if (out.ok && c6.girth_bound) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "C6 girth bounds %.6f and %.6f (25/31)", *c6.girth_bound, *c6u.girth_bound);
      out.detail = buf;
    }
    return out;
  });

  criterion(8, "sampled estimator meets its bound", 300.0, [] {
    Outcome out;
    const double eps = 0.1, delta = 0.05;
    std::string summary;
    for (const auto& [name, g] : {std::pair{std::string("triangle"), oracle::complete(3)},
                                  std::pair{std::string("C4"), oracle::cycle(4)}}) {
      const PairwiseModel m = uniform_model(g, 2, 1.0, equality_table(2));
      const double phi = phi_brute_force(m).phi;
      const double ku = effective_resistance(g).kappa_u;
      const double bound = (1 + eps) / std::sqrt(ku);
      const std::int64_t expected_n = sample_size_for(eps, delta, g, ku);
      int good = 0;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = estimate_uniform_sampled(m, eps, delta, seed, threads());
        if (r.n_samples && *r.n_samples != expected_n && seed == 0) out.fail(name + " unexpected n");
        const double ratio = r.phi_hat / phi;
        good += ratio <= bound && ratio >= 1 / bound;
      }
      if (good < 95) out.fail(name + " held in " + std::to_string(good) + "/100 seeds");
      summary += name + " n=" + std::to_string(expected_n) + " " + std::to_string(good) + "/100 ";
    }
    if (sample_size_for(eps, delta, oracle::complete(3), 2.0 / 3) != 597) out.fail("triangle n is not 597");
    if (out.ok) out.detail = summary;
    return out;
  });

  criterion(9, "shifted grid partitions on the 4x4 grid", 120.0, [] {
    Outcome out;
    FamilyParams fp;
    fp.width = 4;
    fp.height = 4;
    const Graph g = generate_graph(GraphFamily::grid, fp);
    const auto pd = shifted_grid_partitions(4, 4, 2);
    if (std::abs(pd.epsilon - 0.5) > 1e-15) out.fail("epsilon is not 1/2");
    std::mt19937_64 rng(9);
    double lo = 1e300, hi = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      ModelParams p;
      p.theta_max = 5.0;
      p.potential_max = 2.0;
      const PairwiseModel m = random_model(g, p, rng());
      const double ratio = estimate_partition(m, pd, {}, threads()).phi_hat / phi_brute_force(m).phi;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (!(ratio >= std::sqrt(0.5) - 1e-8 && ratio <= std::sqrt(2.0) + 1e-8))
        out.fail("ratio " + std::to_string(ratio));
    }
    if (out.ok) out.detail = "ratios in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    return out;
  });

  criterion(10, "max cut bracket", 60.0, [] {
    Outcome out;
    std::string summary;
    for (const auto& [name, g] : {std::pair{std::string("triangle"), oracle::complete(3)},
                                  std::pair{std::string("C5"), oracle::cycle(5)},
                                  std::pair{std::string("Petersen"), oracle::petersen()}}) {
      const double cut = oracle::maxcut(g);
      const auto b = maxcut_bracket(g, 10.0 * g.node_count() * std::log(2.0));
      if (!(b.lower <= cut && cut <= b.upper)) out.fail(name + " bracket misses " + std::to_string(cut));
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s %g in [%.3f, %.3f] ", name.c_str(), cut, b.lower, b.upper);
      summary += buf;
    }
    if (out.ok) out.detail = summary;
    return out;
  });

  criterion(11, "sampler marginals within three sigma", 180.0, [] {
    Outcome out;
    const std::int64_t n = 30000;
    std::string summary;
    for (const auto& [name, g] : {std::pair{std::string("triangle"), oracle::complete(3)},
                                  std::pair{std::string("K4"), oracle::complete(4)},
                                  std::pair{std::string("C6"), oracle::cycle(6)}}) {
      const auto exact = oracle::tree_marginals(g);
      int good = 0;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto batch = sample_ust(g, n, seed, threads());
        bool all = true;
        for (std::size_t e = 0; e < exact.size(); ++e) {
          const double sigma = std::sqrt(exact[e] * (1 - exact[e]) / static_cast<double>(n));
          all = all && std::abs(batch.empirical_marginals[e] - exact[e]) <= 3 * sigma;
        }
        good += all;
      }
      if (good < 95) out.fail(name + " " + std::to_string(good) + "/100 seeds");
      summary += name + " " + std::to_string(good) + "/100 ";
    }
    if (out.ok) out.detail = summary;
    return out;
  });

  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
