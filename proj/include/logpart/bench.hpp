#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logpart/exact.hpp"
#include "logpart/graph.hpp"

namespace logpart {

struct CorpusEntry {
  std::string id;      // e.g. cycle:6, regular:3:10:s2
  std::string family;  // generator family name, or "triangle"
  Graph graph;
  int grid_width = 0;  // > 0 for grids
  int grid_height = 0;
  std::uint64_t seed = 0;
};

/// Comma or whitespace separated tokens: triangle, petersen, path:N, star:N,
/// cycle:N, complete:N, tree:N[:seed], grid:WxH, regular:D:N:SEEDS,
/// er:N:P:SEEDS (SEEDS is `s` or `lo-hi`), and `default`.
std::vector<CorpusEntry> parse_corpus(std::string_view spec);

/// triangle, path:4, cycle:6, complete:4, complete:5, grid:4x4, petersen, regular:3:10:0-4.
inline constexpr std::string_view kDefaultCorpus =
    "triangle,path:4,cycle:6,complete:4,complete:5,grid:4x4,petersen,regular:3:10:0-4";

struct BenchOptions {
  Caps caps;
  int threads = 1;
  double epsilon = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 1;
  double mw_tol = 1e-3;
  std::int64_t mw_rounds = std::int64_t{1} << 20;
  bool timing = false;
};

struct BenchRecord {
  std::string graph;
  std::string family;
  int nodes = 0;
  int edges = 0;
  std::string kappa;  // p/q, or lo..hi when only bracketed
  double kappa_lo = 0.0;
  double kappa_hi = 0.0;
  double mad_bound = 0.0;
  std::optional<double> girth_bound;
  double kappa_u = 0.0;
  double u_degree_bound = 0.0;
  std::optional<double> u_girth_bound;
  std::string method;
  std::optional<double> phi_exact;
  double phi_hat = 0.0;
  std::optional<double> ratio;  // phi_hat / phi_exact
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  std::optional<std::int64_t> n_samples;
  double seconds_kappa = 0.0;
  double seconds_resistance = 0.0;
  double seconds_exact = 0.0;
  double seconds_estimate = 0.0;
};

/// One record per (graph, method): trwp and uniform for every graph,
/// partition (b = 2) for grids.
std::vector<BenchRecord> run_bench(const std::vector<CorpusEntry>& corpus, const BenchOptions& options);

std::string bench_header(bool timing);
std::string format_record(const BenchRecord& record, bool timing);

/// Re-checks the library invariants over the corpus; empty when all hold.
std::vector<std::string> check_corpus(const std::vector<CorpusEntry>& corpus, const BenchOptions& options);

}  // namespace logpart
