// logpart: command-line front end.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include "logpart/bench.hpp"
#include "logpart/error.hpp"
#include "logpart/exact.hpp"
#include "logpart/generators.hpp"
#include "logpart/kappa.hpp"
#include "logpart/model.hpp"
#include "logpart/trw.hpp"
#include "logpart/ust.hpp"

namespace {

using namespace logpart;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCapability = 3;
constexpr int kExitInternal = 4;

int exit_code_for(Errc code) {
  switch (classify(code)) {
    case ErrorClass::validation: return kExitValidation;
    case ErrorClass::capability: return kExitCapability;
    case ErrorClass::internal: return kExitInternal;
  }
  return kExitInternal;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LOGPART_SEED")) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return value;
    throw Error(Errc::invalid_argument, "LOGPART_SEED must be a non-negative integer");
  }
  return 0;
}

// Small rationals print as p/q, everything else in shortest decimal form.
std::string rational_or_decimal(double x) {
  for (std::int64_t den = 1; den <= 1000; ++den) {
    const double num = std::round(x * static_cast<double>(den));
    if (std::abs(x - num / static_cast<double>(den)) <= 1e-10) {
      const auto p = static_cast<std::int64_t>(num);
      if (std::gcd(p, den) == 1) return std::to_string(p) + "/" + std::to_string(den);
    }
  }
  return format_real(x);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

struct Common {
  Caps caps;
  int threads = 1;
};

void add_caps(CLI::App* cmd, Common& common) {
  cmd->add_option("--cap-configurations", common.caps.configurations, "Brute-force configuration cap (q^N)");
  cmd->add_option("--cap-subset-nodes", common.caps.subset_nodes, "Vertex-subset enumeration cap (N)");
  cmd->add_option("--cap-trees", common.caps.spanning_trees, "Spanning-tree enumeration cap");
  cmd->add_option("--cap-block", common.caps.block_size, "Per-block brute-force cap (vertices)");
  cmd->add_option("--cap-edge-subset", common.caps.edge_subset, "Edge-subset enumeration cap (|E|)");
  cmd->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-partition estimates with spanning-tree guarantees"};
  app.require_subcommand(1);
  Common common;

  // estimate
  auto* estimate = app.add_subcommand("estimate", "TRW' estimate of the log-partition function");
  std::string model_path, method = "trwp", partition_path;
  double tol = 1e-6, epsilon = 0.0, delta = 0.0;
  std::optional<std::uint64_t> seed;
  int grid_shift = 0, grid_width = 0;
  estimate->add_option("--model", model_path, "Model file (gmodel)")->required();
  estimate->add_option("--method", method, "trwp | uniform | partition")
      ->check(CLI::IsMember({"trwp", "uniform", "partition"}));
  estimate->add_option("--tol", tol, "MW gap when kappa is not computed exactly");
  estimate->add_option("--epsilon", epsilon, "Accuracy for the sampled estimator");
  estimate->add_option("--delta", delta, "Failure probability for the sampled estimator");
  estimate->add_option("--seed", seed, "Seed (default: LOGPART_SEED or 0)");
  estimate->add_option("--partition-file", partition_path, "Partition distribution file");
  estimate->add_option("--grid-shift", grid_shift, "Block side b for shifted grid partitions");
  estimate->add_option("--grid-width", grid_width, "Grid width for --grid-shift (default: square grid)");
  add_caps(estimate, common);

  // kappa
  auto* kappa = app.add_subcommand("kappa", "kappa(G) with primal and dual certificates");
  std::string graph_path;
  bool exact_flag = false, mw_flag = false, verify_flag = false;
  std::int64_t iterations = std::int64_t{1} << 22;
  double kappa_tol = 1e-3;
  kappa->add_option("--graph", graph_path, "Graph file (ggraph or gmodel)")->required();
  auto* exact_opt = kappa->add_flag("--exact", exact_flag, "Exact subset enumeration");
  auto* mw_opt = kappa->add_flag("--mw", mw_flag, "Multiplicative-weights bracket");
  exact_opt->excludes(mw_opt);
  kappa->add_option("--tol", kappa_tol, "Bracket width for --mw");
  kappa->add_option("--iterations", iterations, "Round cap for --mw")->check(CLI::PositiveNumber);
  kappa->add_flag("--verify", verify_flag, "Re-check the emitted certificate");
  add_caps(kappa, common);

  // exact
  auto* exact = app.add_subcommand("exact", "Exact log-partition function");
  exact->add_option("--model", model_path, "Model file (gmodel)")->required();
  add_caps(exact, common);

  // resistance
  auto* resistance = app.add_subcommand("resistance", "Effective resistance of every edge");
  resistance->add_option("--graph", graph_path, "Graph file")->required();
  add_caps(resistance, common);

  // sample
  auto* sample = app.add_subcommand("sample", "Uniform spanning trees by random walk");
  std::int64_t count = 1;
  sample->add_option("--graph", graph_path, "Graph file")->required();
  sample->add_option("--n", count, "Number of trees")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Seed (default: LOGPART_SEED or 0)");
  add_caps(sample, common);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph or model");
  std::string family;
  FamilyParams params;
  bool as_model = false;
  ModelParams model_params;
  gen->add_option("--family", family, "tree|path|star|cycle|complete|grid|random_regular|erdos_renyi|petersen")
      ->required();
  gen->add_option("--n", params.n, "Vertex count");
  gen->add_option("--width", params.width, "Grid width");
  gen->add_option("--height", params.height, "Grid height");
  gen->add_option("--degree", params.degree, "Degree for random_regular");
  gen->add_option("--p", params.p, "Edge probability for erdos_renyi");
  gen->add_option("--seed", seed, "Seed (default: LOGPART_SEED or 0)");
  gen->add_flag("--model", as_model, "Emit a random gmodel instead of a ggraph");
  gen->add_option("--alphabet", model_params.alphabet, "Alphabet size for --model");
  gen->add_option("--theta-min", model_params.theta_min, "Lowest edge weight for --model");
  gen->add_option("--theta-max", model_params.theta_max, "Highest edge weight for --model");
  gen->add_option("--potential-max", model_params.potential_max, "Largest potential entry for --model");

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark table over a corpus");
  std::string corpus = "default", out_path = "-";
  bool check = false, timing = false;
  BenchOptions bench_options;
  bench->add_option("--corpus", corpus, "Corpus spec (see README)");
  bench->add_option("--out", out_path, "Output TSV path ('-' for stdout)");
  bench->add_flag("--check", check, "Assert all invariants over the corpus");
  bench->add_flag("--timing", timing, "Append wall-time columns");
  bench->add_option("--seed", seed, "Seed (default: LOGPART_SEED or 0)");
  bench->add_option("--epsilon", bench_options.epsilon, "Accuracy for the sampled estimator");
  bench->add_option("--delta", bench_options.delta, "Failure probability for the sampled estimator");
  bench->add_option("--mw-tol", bench_options.mw_tol, "MW bracket width");
  add_caps(bench, common);

  // verify
  auto* verify = app.add_subcommand("verify", "Check a kappa certificate against a graph");
  std::string cert_path;
  verify->add_option("--graph", graph_path, "Graph file")->required();
  verify->add_option("--certificate", cert_path, "Certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const std::uint64_t the_seed = seed ? *seed : default_seed();

    if (*estimate) {
      const PairwiseModel m = parse_model(read_text_file(model_path));
      EstimateReport report;
      if (method == "trwp") {
        TrwOptions options;
        options.tol = tol;
        options.caps = common.caps;
        options.threads = common.threads;
        report = estimate_trw_prime(m, options);
      } else if (method == "uniform") {
        if (epsilon <= 0.0 || delta <= 0.0)
          throw Error(Errc::invalid_argument, "uniform method requires --epsilon and --delta");
        report = estimate_uniform_sampled(m, epsilon, delta, the_seed, common.threads);
      } else {
        PartitionDistribution pd;
        if (!partition_path.empty()) {
          pd = parse_partition_distribution(m.graph(), read_text_file(partition_path), common.caps.block_size);
        } else if (grid_shift > 0) {
          const int n = m.graph().node_count();
          int width = grid_width;
          if (width == 0) width = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
          if (width <= 0 || n % width != 0) throw Error(Errc::invalid_argument, "cannot infer grid shape; pass --grid-width");
          pd = shifted_grid_partitions(width, n / width, grid_shift);
          FamilyParams gp;
          gp.width = width;
          gp.height = n / width;
          if (!(generate_graph(GraphFamily::grid, gp) == m.graph()))
            throw Error(Errc::invalid_argument, "model graph is not a " + std::to_string(width) + "-wide grid");
        } else {
          throw Error(Errc::invalid_argument, "partition method requires --partition-file or --grid-shift");
        }
        report = estimate_partition(m, pd, common.caps, common.threads);
      }
      std::cout << serialize_report(report);
      return kExitOk;
    }

    if (*kappa) {
      const Graph g = parse_graph(read_text_file(graph_path));
      std::string text;
      if (mw_flag) {
        text = format_certificate(balanced_covering(g, iterations, kappa_tol));
      } else {
        text = format_certificate(kappa_exact(g, common.caps));
      }
      std::cout << text;
      if (verify_flag) {
        const auto result = verify_certificate(g, text);
        for (const auto& [name, ok] : result.checks) std::cout << "verify " << (ok ? "PASS" : "FAIL") << " " << name << "\n";
        return result.passed() ? kExitOk : kExitInternal;
      }
      return kExitOk;
    }

    if (*exact) {
      const PairwiseModel m = parse_model(read_text_file(model_path));
      LogPartitionValue value;
      try {
        value = phi_tree(m);
      } catch (const Error& e) {
        if (e.code() != Errc::cycle_in_support) throw;
        value = phi_brute_force(m, common.caps);
      }
      std::cout << "phi " << format_real(value.phi) << "\nmethod " << to_string(value.method) << "\n";
      return kExitOk;
    }

    if (*resistance) {
      const Graph g = parse_graph(read_text_file(graph_path));
      const auto profile = effective_resistance(g, common.threads);
      for (EdgeId e = 0; e < g.edge_count(); ++e)
        std::cout << "u " << g.edge(e).u << " " << g.edge(e).v << " "
                  << rational_or_decimal(profile.u[static_cast<std::size_t>(e)]) << "\n";
      std::cout << "kappa_u " << rational_or_decimal(profile.kappa_u) << "\n";
      return kExitOk;
    }

    if (*sample) {
      const Graph g = parse_graph(read_text_file(graph_path));
      std::cout << format_sample_batch(sample_ust(g, count, the_seed, common.threads));
      return kExitOk;
    }

    if (*gen) {
      const auto fam = parse_family(family);
      if (!fam) throw Error(Errc::invalid_argument, "unknown family '" + family + "'");
      const Graph g = generate_graph(*fam, params, the_seed);
      std::cout << (as_model ? serialize_model(random_model(g, model_params, the_seed)) : serialize_graph(g));
      return kExitOk;
    }

    if (*bench) {
      bench_options.caps = common.caps;
      bench_options.threads = common.threads;
      bench_options.seed = the_seed;
      bench_options.timing = timing;
      const auto entries = parse_corpus(corpus);
      if (check) {
        const auto violations = check_corpus(entries, bench_options);
        for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
        if (!violations.empty()) return kExitInternal;
      }
      std::string table = bench_header(timing);
      for (const auto& r : run_bench(entries, bench_options)) table += format_record(r, timing);
      write_output(out_path, table);
      return kExitOk;
    }

    if (*verify) {
      const Graph g = parse_graph(read_text_file(graph_path));
      const auto result = verify_certificate(g, read_text_file(cert_path));
      for (const auto& [name, ok] : result.checks) std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
      return result.passed() ? kExitOk : kExitInternal;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
