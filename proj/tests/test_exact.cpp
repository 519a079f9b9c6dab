#include <doctest.h>

#include <cmath>
#include <random>

#include "logpart/error.hpp"
#include "logpart/exact.hpp"
#include "logpart/generators.hpp"
#include "support.hpp"

using namespace logpart;

TEST_CASE("single edge equality model") {
  const PairwiseModel m = uniform_model(oracle::path(2), 2, 1.0, equality_table(2));
  // log(2e + 2)
  CHECK(phi_brute_force(m).phi == doctest::Approx(2.006408868078168).epsilon(1e-14));
  CHECK(phi_tree(m).phi == doctest::Approx(2.006408868078168).epsilon(1e-14));
}

TEST_CASE("triangle equality model") {
  const PairwiseModel m = uniform_model(oracle::complete(3), 2, 1.0, equality_table(2));
  // log(2e^3 + 6e)
  const auto v = phi_brute_force(m);
  CHECK(v.phi == doctest::Approx(4.033900134473076).epsilon(1e-14));
  CHECK(v.method == PhiMethod::brute_force);
  CHECK_THROWS_AS(phi_tree(m), Error);
}

TEST_CASE("zero weights give N log q") {
  const PairwiseModel m = uniform_model(oracle::complete(4), 3, 0.0, equality_table(3));
  CHECK(phi_brute_force(m).phi == doctest::Approx(4 * std::log(3.0)).epsilon(1e-14));
  CHECK(phi_tree(m).phi == doctest::Approx(4 * std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("brute force matches direct summation on random models") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const Graph g = oracle::random_connected(rng, n, 12);
    ModelParams p;
    p.alphabet = 2 + static_cast<int>(rng() % 2);
    p.theta_max = 3.0;
    p.potential_max = 2.0;
    const PairwiseModel m = random_model(g, p, rng());
    CHECK(phi_brute_force(m).phi == doctest::Approx(oracle::log_partition(m)).epsilon(1e-12));
  }
}

TEST_CASE("tree sum-product matches brute force") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    FamilyParams fp;
    fp.n = 2 + static_cast<int>(rng() % 9);
    const Graph g = generate_graph(GraphFamily::tree, fp, rng());
    ModelParams p;
    p.alphabet = 2 + static_cast<int>(rng() % 3);
    p.theta_max = 4.0;
    p.potential_max = 2.0;
    const PairwiseModel m = random_model(g, p, rng());
    if (std::pow(p.alphabet, fp.n) > 2e5) continue;
    const auto v = phi_tree(m);
    CHECK(v.method == PhiMethod::tree_sum_product);
    CHECK(v.phi == doctest::Approx(oracle::log_partition(m)).epsilon(1e-12));
  }
}

TEST_CASE("tree restriction of a cyclic model") {
  // Asymmetric tables check that the row index follows the smaller endpoint.
  const Graph g = oracle::complete(4);
  std::mt19937_64 rng(3);
  ModelParams p;
  p.alphabet = 3;
  p.theta_max = 2.0;
  const PairwiseModel m = random_model(g, p, 99);
  const SpanningTree star(g, {0, 1, 2});  // edges at vertex 0
  std::vector<double> masked(6, 0.0);
  for (EdgeId e : star.edges()) masked[static_cast<std::size_t>(e)] = m.theta()[static_cast<std::size_t>(e)];
  const double want = oracle::log_partition(m, masked);
  CHECK(phi_tree(m, star).phi == doctest::Approx(want).epsilon(1e-13));
  CHECK(phi_tree(m, masked).phi == doctest::Approx(want).epsilon(1e-13));
  const SpanningTree chain(g, {0, 3, 5});  // 0-1, 1-2, 2-3
  std::vector<double> along(6, 0.0);
  for (EdgeId e : chain.edges()) along[static_cast<std::size_t>(e)] = m.theta()[static_cast<std::size_t>(e)];
  CHECK(phi_tree(m, chain).phi == doctest::Approx(oracle::log_partition(m, along)).epsilon(1e-13));
}

TEST_CASE("forest support includes isolated vertices") {
  const Graph g = oracle::path(4);
  const PairwiseModel m = uniform_model(g, 2, 1.0, equality_table(2));
  std::vector<double> theta{1.0, 0.0, 1.0};
  CHECK(phi_tree(m, theta).phi == doctest::Approx(oracle::log_partition(m, theta)).epsilon(1e-13));
}

TEST_CASE("component product equals brute force with crossing edges dropped") {
  std::mt19937_64 rng(41);
  const Graph g = oracle::complete(5);
  ModelParams p;
  p.alphabet = 2;
  p.theta_max = 2.0;
  const PairwiseModel m = random_model(g, p, 5);
  const VertexPartition blocks{{0, 3}, {1, 2, 4}};
  std::vector<double> theta = m.theta();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const bool a = g.edge(e).u == 0 || g.edge(e).u == 3, b = g.edge(e).v == 0 || g.edge(e).v == 3;
    if (a != b) theta[static_cast<std::size_t>(e)] = 0.0;
  }
  const auto v = phi_components(m, blocks);
  CHECK(v.method == PhiMethod::component_product);
  CHECK(v.phi == doctest::Approx(oracle::log_partition(m, theta)).epsilon(1e-13));
  CHECK(phi_components(m, VertexPartition{{0, 1, 2, 3, 4}}).phi == doctest::Approx(oracle::log_partition(m)));
  CHECK_THROWS_AS(validate_partition(g, {{0, 1}, {1, 2, 3, 4}}), Error);
  CHECK_THROWS_AS(validate_partition(g, {{0, 1}, {2, 3}}), Error);
}

TEST_CASE("monotone in theta, sub-linear in scaling") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_connected(rng, 5, 8);
    ModelParams p;
    p.theta_max = 2.0;
    const PairwiseModel m = random_model(g, p, rng());
    const double base = phi_brute_force(m).phi;
    auto bigger = m.theta();
    bigger[rng() % bigger.size()] += 0.7;
    CHECK(phi_brute_force(m, bigger).phi >= base - 1e-12);
    // Phi(t theta) <= t Phi(theta) for t >= 1 and Phi(t theta) >= t Phi(theta) for t <= 1.
    for (double t : {0.25, 0.5, 2.0, 3.0}) {
      auto scaled = m.theta();
      for (double& x : scaled) x *= t;
      const double s = phi_brute_force(m, scaled).phi;
      if (t >= 1.0)
        CHECK(s <= t * base + 1e-10);
      else
        CHECK(s >= t * base - 1e-10);
    }
  }
}

TEST_CASE("brute force honours the configuration cap") {
  const PairwiseModel m = uniform_model(oracle::path(10), 3, 1.0, equality_table(3));
  Caps caps;
  caps.configurations = 1000;
  try {
    phi_brute_force(m, caps);
    FAIL("expected cap error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cap_exceeded);
  }
}

TEST_CASE("spanning tree enumeration and counting") {
  CHECK(kirchhoff_tree_count(oracle::complete(4)) == doctest::Approx(16));
  CHECK(kirchhoff_tree_count(oracle::complete(5)) == doctest::Approx(125));
  CHECK(kirchhoff_tree_count(oracle::cycle(7)) == doctest::Approx(7));
  CHECK(kirchhoff_tree_count(oracle::petersen()) == doctest::Approx(2000));
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = oracle::random_connected(rng, 2 + static_cast<int>(rng() % 6), 11);
    const auto naive = oracle::spanning_trees(g);
    const auto listed = enumerate_spanning_trees(g);
    CHECK(listed.count == naive.size());
    CHECK(kirchhoff_tree_count(g) == doctest::Approx(static_cast<double>(naive.size())));
    std::vector<std::vector<int>> got;
    for (const auto& t : listed.trees) got.emplace_back(t.edges().begin(), t.edges().end());
    std::sort(got.begin(), got.end());
    auto want = naive;
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
  Caps caps;
  caps.spanning_trees = 100;
  CHECK_THROWS_AS(enumerate_spanning_trees(oracle::petersen(), caps), Error);
}

TEST_CASE("max weight spanning tree") {
  const Graph g = oracle::complete(3);
  const auto best = max_weight_spanning_tree(g, std::vector<double>{3.0 / 6, 2.0 / 6, 1.0 / 6});
  CHECK(best.tree.edges() == std::vector<EdgeId>{0, 1});
  CHECK(best.total_weight == doctest::Approx(5.0 / 6));
  // Ties go to the smaller index.
  const auto tie = max_weight_spanning_tree(g, std::vector<double>{1.0, 1.0, 1.0});
  CHECK(tie.tree.edges() == std::vector<EdgeId>{0, 1});
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph h = oracle::random_connected(rng, 6, 12);
    std::vector<double> w(static_cast<std::size_t>(h.edge_count()));
    for (double& x : w) x = static_cast<double>(rng() % 1000) / 1000.0;
    double want = -1.0;
    for (const auto& t : oracle::spanning_trees(h)) {
      double s = 0.0;
      for (int e : t) s += w[static_cast<std::size_t>(e)];
      want = std::max(want, s);
    }
    CHECK(max_weight_spanning_tree(h, w).total_weight == doctest::Approx(want).epsilon(1e-12));
  }
}
