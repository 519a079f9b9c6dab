#include "logpart/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "logpart/error.hpp"
#include "logpart/generators.hpp"
#include "logpart/kappa.hpp"
#include "logpart/random.hpp"
#include "logpart/trw.hpp"
#include "logpart/ust.hpp"

namespace logpart {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T number(std::string_view tok, std::string_view token) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
    throw Error(Errc::malformed_input, "bad number '" + std::string(tok) + "' in corpus token '" +
                                           std::string(token) + "'");
  return value;
}

std::pair<std::uint64_t, std::uint64_t> seed_range(std::string_view tok, std::string_view token) {
  const auto dash = tok.find('-');
  if (dash == std::string_view::npos) {
    const auto s = number<std::uint64_t>(tok, token);
    return {s, s};
  }
  const auto lo = number<std::uint64_t>(tok.substr(0, dash), token);
  const auto hi = number<std::uint64_t>(tok.substr(dash + 1), token);
  if (hi < lo) throw Error(Errc::malformed_input, "empty seed range in corpus token '" + std::string(token) + "'");
  return {lo, hi};
}

void add_token(std::vector<CorpusEntry>& out, const std::string& token) {
  const auto parts = split(token, ':');
  const std::string& head = parts[0];
  auto expect = [&](std::size_t n) {
    if (parts.size() != n) throw Error(Errc::malformed_input, "corpus token '" + token + "' has the wrong arity");
  };
  auto push = [&](std::string id, GraphFamily family, const FamilyParams& params, std::uint64_t seed) {
    CorpusEntry entry{std::move(id), std::string(family_name(family)), generate_graph(family, params, seed)};
    entry.seed = seed;
    if (family == GraphFamily::grid) entry.grid_width = params.width, entry.grid_height = params.height;
    out.push_back(std::move(entry));
  };
  FamilyParams params;
  if (head == "default") {
    expect(1);
    for (const auto& t : parse_corpus(kDefaultCorpus)) out.push_back(t);
  } else if (head == "triangle") {
    expect(1);
    params.n = 3;
    push("triangle", GraphFamily::complete, params, 0);
    out.back().family = "triangle";
  } else if (head == "petersen") {
    expect(1);
    push("petersen", GraphFamily::petersen, params, 0);
  } else if (head == "path" || head == "star" || head == "cycle" || head == "complete") {
    expect(2);
    params.n = number<int>(parts[1], token);
    push(token, *parse_family(head), params, 0);
  } else if (head == "tree") {
    if (parts.size() != 2 && parts.size() != 3) expect(3);
    params.n = number<int>(parts[1], token);
    push(token, GraphFamily::tree, params, parts.size() == 3 ? number<std::uint64_t>(parts[2], token) : 0);
  } else if (head == "grid") {
    expect(2);
    const auto x = parts[1].find('x');
    if (x == std::string::npos) throw Error(Errc::malformed_input, "grid token needs WxH: '" + token + "'");
    params.width = number<int>(std::string_view(parts[1]).substr(0, x), token);
    params.height = number<int>(std::string_view(parts[1]).substr(x + 1), token);
    push(token, GraphFamily::grid, params, 0);
  } else if (head == "regular") {
    expect(4);
    params.degree = number<int>(parts[1], token);
    params.n = number<int>(parts[2], token);
    const auto [lo, hi] = seed_range(parts[3], token);
    for (auto s = lo; s <= hi; ++s) push("regular:" + parts[1] + ":" + parts[2] + ":s" + std::to_string(s),
                                         GraphFamily::random_regular, params, s);
  } else if (head == "er") {
    expect(4);
    params.n = number<int>(parts[1], token);
    params.p = number<double>(parts[2], token);
    const auto [lo, hi] = seed_range(parts[3], token);
    for (auto s = lo; s <= hi; ++s)
      push("er:" + parts[1] + ":" + parts[2] + ":s" + std::to_string(s), GraphFamily::erdos_renyi, params, s);
  } else {
    throw Error(Errc::malformed_input, "unknown corpus token '" + token + "'");
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

PairwiseModel bench_model(const CorpusEntry& entry, const BenchOptions& options) {
  ModelParams params;
  params.alphabet = 2;
  params.theta_min = 0.0;
  params.theta_max = 1.0;
  params.potential_max = 1.0;
  return random_model(entry.graph, params, mix64(options.seed) ^ mix64(entry.seed + 0x51ed27));
}

bool brute_force_feasible(const Graph& g, int q, const Caps& caps) {
  double configs = std::pow(static_cast<double>(q), g.node_count());
  return configs <= static_cast<double>(caps.configurations);
}

std::string real_or_dash(const std::optional<double>& x) { return x ? format_real(*x) : "-"; }

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::string_view spec) {
  std::vector<CorpusEntry> out;
  std::string normalized(spec);
  std::replace_if(normalized.begin(), normalized.end(), [](char c) { return c == ',' || std::isspace(
      static_cast<unsigned char>(c)); }, ' ');
  std::istringstream in(normalized);
  for (std::string token; in >> token;) add_token(out, token);
  return out;
}

std::vector<BenchRecord> run_bench(const std::vector<CorpusEntry>& corpus, const BenchOptions& options) {
  std::vector<BenchRecord> records;
  for (const auto& entry : corpus) {
    const Graph& g = entry.graph;
    BenchRecord base;
    base.graph = entry.id;
    base.family = entry.family;
    base.nodes = g.node_count();
    base.edges = g.edge_count();

    auto start = std::chrono::steady_clock::now();
    TrwOptions trw;
    trw.caps = options.caps;
    trw.threads = options.threads;
    trw.tol = options.mw_tol;
    trw.max_rounds = options.mw_rounds;
    TreeDistribution rho;
    if (g.edge_count() == 0) {
      base.kappa = "1/1";
      base.kappa_lo = base.kappa_hi = 1.0;
      rho = optimal_covering(g, trw);
    } else if (g.node_count() <= options.caps.subset_nodes) {
      auto cert = kappa_exact(g, options.caps);
      base.kappa = cert.kappa.str();
      base.kappa_lo = base.kappa_hi = cert.kappa.to_double();
      rho = std::move(cert.primal);
    } else {
      auto mw = balanced_covering(g, options.mw_rounds, options.mw_tol);
      base.kappa = format_real(mw.lower) + ".." + format_real(mw.upper);
      base.kappa_lo = mw.lower;
      base.kappa_hi = mw.upper;
      rho = std::move(mw.distribution);
    }
    const auto structural = kappa_bounds_structural(g, options.caps);
    base.mad_bound = structural.mad_bound;
    base.girth_bound = structural.girth_bound;
    base.seconds_kappa = seconds_since(start);

    start = std::chrono::steady_clock::now();
    base.kappa_u = effective_resistance(g, options.threads).kappa_u;
    const auto ubounds = resistance_bounds_structural(g);
    base.u_degree_bound = ubounds.degree_bound;
    base.u_girth_bound = ubounds.girth_bound;
    base.seconds_resistance = seconds_since(start);

    const PairwiseModel m = bench_model(entry, options);
    start = std::chrono::steady_clock::now();
    if (brute_force_feasible(g, m.alphabet_size(), options.caps)) base.phi_exact = phi_brute_force(m, options.caps).phi;
    base.seconds_exact = seconds_since(start);

    auto emit = [&](const EstimateReport& report, double seconds) {
      BenchRecord r = base;
      r.method = to_string(report.method);
      r.phi_hat = report.phi_hat;
      if (r.phi_exact) r.ratio = report.phi_hat / *r.phi_exact;
      r.interval_lo = report.ratio_lo;
      r.interval_hi = report.ratio_hi;
      r.n_samples = report.n_samples;
      r.seconds_estimate = seconds;
      records.push_back(std::move(r));
    };

    start = std::chrono::steady_clock::now();
    const auto [L, U] = lower_upper(m, rho, options.threads);
    emit(make_report(L, U, weighted_coverage(m.theta(), rho.edge_marginals), EstimateMethod::trw_prime),
         seconds_since(start));

    start = std::chrono::steady_clock::now();
    const auto sampled = estimate_uniform_sampled(m, options.epsilon, options.delta, options.seed, options.threads);
    emit(sampled, seconds_since(start));

    if (entry.grid_width > 0) {
      start = std::chrono::steady_clock::now();
      const auto pd = shifted_grid_partitions(entry.grid_width, entry.grid_height, 2);
      emit(estimate_partition(m, pd, options.caps, options.threads), seconds_since(start));
    }
  }
  return records;
}

std::string bench_header(bool timing) {
  std::string h =
      "graph\tfamily\tN\tE\tkappa\tkappa_lo\tkappa_hi\tmad_bound\tgirth_bound\tkappa_u\tu_degree_bound\tu_girth_bound\t"
      "method\tphi_exact\tphi_hat\tratio\tinterval_lo\tinterval_hi\tn_samples";
  if (timing) h += "\tsec_kappa\tsec_resistance\tsec_exact\tsec_estimate";
  return h + "\n";
}

std::string format_record(const BenchRecord& r, bool timing) {
  std::string line = r.graph + "\t" + r.family + "\t" + std::to_string(r.nodes) + "\t" + std::to_string(r.edges) +
                     "\t" + r.kappa + "\t" + format_real(r.kappa_lo) + "\t" + format_real(r.kappa_hi) + "\t" +
                     format_real(r.mad_bound) + "\t" + real_or_dash(r.girth_bound) + "\t" + format_real(r.kappa_u) +
                     "\t" + format_real(r.u_degree_bound) + "\t" + real_or_dash(r.u_girth_bound) + "\t" + r.method +
                     "\t" + real_or_dash(r.phi_exact) + "\t" + format_real(r.phi_hat) + "\t" + real_or_dash(r.ratio) +
                     "\t" + format_real(r.interval_lo) + "\t" + format_real(r.interval_hi) + "\t" +
                     (r.n_samples ? std::to_string(*r.n_samples) : "-");
  if (timing)
    line += "\t" + format_real(r.seconds_kappa) + "\t" + format_real(r.seconds_resistance) + "\t" +
            format_real(r.seconds_exact) + "\t" + format_real(r.seconds_estimate);
  return line + "\n";
}

std::vector<std::string> check_corpus(const std::vector<CorpusEntry>& corpus, const BenchOptions& options) {
  std::vector<std::string> bad;
  constexpr double tol = 1e-8;
  for (const auto& entry : corpus) {
    const Graph& g = entry.graph;
    auto fail = [&](const std::string& what) { bad.push_back(entry.id + ": " + what); };
    if (g.edge_count() == 0) continue;

    // Tree distributions and kappa.
    std::optional<Rational> exact;
    if (g.node_count() <= options.caps.subset_nodes) {
      const auto cert = kappa_exact(g, options.caps);
      exact = cert.kappa;
      for (const auto& v : tree_distribution_violations(g, cert.primal, options.caps)) fail("exact primal: " + v);
      if (cert.gap > 1e-6) fail("exact primal/dual gap " + format_real(cert.gap));
      if (max_weight_spanning_tree(g, cert.dual_w).total_weight > cert.kappa.to_double() + 1e-9)
        fail("dual certificate exceeds kappa");
      if (g.edge_count() <= options.caps.edge_subset && kappa_subgraph_form(g, options.caps) != cert.kappa)
        fail("subset and edge-set forms of kappa differ");
    }
    const auto mw = balanced_covering(g, options.mw_rounds, options.mw_tol);
    for (const auto& v : tree_distribution_violations(g, mw.distribution, options.caps)) fail("MW primal: " + v);
    if (exact && (mw.lower > exact->to_double() + 1e-9 || mw.upper < exact->to_double() - 1e-9))
      fail("MW bracket misses kappa");
    const double kappa_ref = exact ? exact->to_double() : mw.upper;
    const auto structural = kappa_bounds_structural(g, options.caps);
    if (structural.mad_bound > kappa_ref + 1e-12) fail("average-degree bound exceeds kappa");
    if (structural.girth_bound && *structural.girth_bound > kappa_ref + 1e-12) fail("girth bound exceeds kappa");

    // Resistances.
    const auto profile = effective_resistance(g, options.threads);
    double foster = 0.0;
    for (double u : profile.u) foster += u;
    if (std::abs(foster - (g.node_count() - 1)) > tol) fail("Foster identity off by " + format_real(foster));
    if (kirchhoff_tree_count(g) <= 1e5) {
      const auto trees = enumerate_spanning_trees(g, options.caps);
      std::vector<double> share(profile.u.size(), 0.0);
      for (const auto& t : trees.trees)
        for (EdgeId e : t.edges()) share[static_cast<std::size_t>(e)] += 1.0;
      for (std::size_t e = 0; e < share.size(); ++e)
        if (std::abs(share[e] / static_cast<double>(trees.count) - profile.u[e]) > tol)
          fail("resistance of edge " + std::to_string(e) + " differs from tree marginal");
    }
    const auto ub = resistance_bounds_structural(g);
    if (ub.degree_bound > profile.kappa_u + 1e-12) fail("degree bound exceeds kappa_u");
    if (ub.girth_bound && *ub.girth_bound > profile.kappa_u + 1e-12) fail("resistance girth bound exceeds kappa_u");

    // Sampler.
    const auto one = sample_ust(g, 200, options.seed, 1);
    const auto many = sample_ust(g, 200, options.seed, std::max(2, options.threads));
    if (one.trees != many.trees) fail("sample batch depends on thread count");
    std::int64_t total = 0;
    for (auto c : one.edge_counts) total += c;
    if (total != one.n * (g.node_count() - 1)) fail("empirical marginals do not sum to N-1");

    // Estimators against the exact value.
    const PairwiseModel m = bench_model(entry, options);
    if (!brute_force_feasible(g, m.alphabet_size(), options.caps)) continue;
    const double phi = phi_brute_force(m, options.caps).phi;
    auto sandwich = [&](const std::string& name, const TreeDistribution& rho) {
      const auto [L, U] = lower_upper(m, rho, options.threads);
      const double k = weighted_coverage(m.theta(), rho.edge_marginals);
      if (!(k * phi - tol <= L && L <= phi + tol && phi <= U + tol && U <= phi / k + tol))
        fail(name + ": sandwich violated");
      if (U > L / k + tol) fail(name + ": U exceeds L / kappa");
      const auto report = make_report(L, U, k, EstimateMethod::trw_prime);
      const double ratio = report.phi_hat / phi;
      if (ratio < report.ratio_lo - tol || ratio > report.ratio_hi + tol) fail(name + ": ratio outside interval");
      // Raising one weight cannot lower the estimate.
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        auto theta = m.theta();
        theta[static_cast<std::size_t>(e)] += 0.5;
        const auto [L2, U2] = lower_upper(m.with_theta(theta), rho, options.threads);
        if (std::sqrt(L2 * U2) < report.phi_hat - 1e-9) fail(name + ": estimate not monotone in theta");
      }
    };
    sandwich("trwp", optimal_covering(g, TrwOptions{options.mw_tol, options.mw_rounds, options.caps, options.threads}));
    sandwich("mw", mw.distribution);
    const auto sampled = estimate_uniform_sampled(m, options.epsilon, options.delta, options.seed, options.threads);
    if (sampled.phi_hat / phi < sampled.ratio_lo - tol || sampled.phi_hat / phi > sampled.ratio_hi + tol)
      fail("uniform: ratio outside interval");
    if (entry.grid_width > 0) {
      const auto pd = shifted_grid_partitions(entry.grid_width, entry.grid_height, 2);
      const auto r = estimate_partition(m, pd, options.caps, options.threads);
      if (r.phi_hat / phi < r.ratio_lo - tol || r.phi_hat / phi > r.ratio_hi + tol)
        fail("partition: ratio outside interval");
    }
  }
  return bad;
}

}  // namespace logpart
