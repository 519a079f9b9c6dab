#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "logpart/bench.hpp"
#include "logpart/error.hpp"
#include "logpart/generators.hpp"
#include "logpart/model.hpp"
#include "support.hpp"

using namespace logpart;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(LOGPART_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "logpart_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

}  // namespace

TEST_CASE("corpus parsing") {
  const auto def = parse_corpus("default");
  CHECK(def.size() == 12);
  CHECK(def.front().id == "triangle");
  CHECK(def.back().id == "regular:3:10:s4");
  CHECK(parse_corpus(kDefaultCorpus).size() == 12);
  CHECK(parse_corpus("").empty());
  const auto some = parse_corpus("cycle:5 grid:3x2,tree:6:7");
  REQUIRE(some.size() == 3);
  CHECK(some[0].graph.edge_count() == 5);
  CHECK(some[1].grid_width == 3);
  CHECK(some[1].grid_height == 2);
  CHECK(some[2].graph.edge_count() == 5);
  CHECK_THROWS_AS(parse_corpus("cycle"), Error);
  CHECK_THROWS_AS(parse_corpus("hexagon:4"), Error);
  CHECK_THROWS_AS(parse_corpus("grid:3"), Error);
}

TEST_CASE("bench records keep realized ratios inside the interval") {
  BenchOptions opt;
  const auto corpus = parse_corpus("triangle,cycle:5,grid:3x3");
  const auto records = run_bench(corpus, opt);
  CHECK(records.size() == 7);
  for (const auto& r : records) {
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio >= r.interval_lo - 1e-8);
    CHECK(*r.ratio <= r.interval_hi + 1e-8);
    CHECK(r.mad_bound <= r.kappa_hi + 1e-12);
    CHECK(r.u_degree_bound <= r.kappa_u + 1e-12);
  }
  CHECK(records[0].kappa == "2/3");
  CHECK(check_corpus(corpus, opt).empty());
  const std::string header = bench_header(false);
  CHECK(header.find("sec_") == std::string::npos);
  CHECK(bench_header(true).find("sec_") != std::string::npos);
  std::size_t tabs = 0;
  for (char c : header) tabs += c == '\t';
  for (const auto& r : records) {
    const std::string line = format_record(r, false);
    std::size_t t = 0;
    for (char c : line) t += c == '\t';
    CHECK(t == tabs);
  }
}

TEST_CASE("cli kappa, resistance and verify") {
  const auto tri = scratch("tri.gg", serialize_graph(oracle::complete(3)));
  const auto k5 = scratch("k5.gg", serialize_graph(oracle::complete(5)));
  const auto c4 = scratch("c4.gg", serialize_graph(oracle::cycle(4)));

  const Run a = cli("kappa --graph " + tri.string() + " --exact");
  CHECK(a.status == 0);
  CHECK(field(a.out, "kappa") == "2/3");
  CHECK(field(cli("kappa --graph " + k5.string() + " --exact").out, "kappa") == "2/5");

  const Run mw = cli("kappa --graph " + c4.string() + " --mw --tol 1e-3 --verify");
  CHECK(mw.status == 0);
  const double lo = std::stod(field(mw.out, "kappa_lower"));
  const double hi = std::stod(field(mw.out, "kappa_upper"));
  CHECK(lo <= 0.75);
  CHECK(hi >= 0.75);
  CHECK(hi - lo <= 1e-3);
  CHECK(mw.out.find("FAIL") == std::string::npos);

  const Run res = cli("resistance --graph " + tri.string());
  CHECK(res.status == 0);
  CHECK(res.out == "u 0 1 2/3\nu 0 2 2/3\nu 1 2 2/3\nkappa_u 2/3\n");

  const auto cert = scratch("tri.cert", a.out);
  CHECK(cli("verify --graph " + tri.string() + " --certificate " + cert.string()).status == 0);
  std::string forged = a.out;
  forged.replace(0, 9, "kappa 1/1");
  const auto bad = scratch("bad.cert", forged);
  CHECK(cli("verify --graph " + tri.string() + " --certificate " + bad.string()).status == 4);

  CHECK(cli("kappa --graph " + k5.string() + " --exact --cap-subset-nodes 3").status == 3);
}

TEST_CASE("cli estimate, exact, sample and gen") {
  const auto tri = scratch("tri.gm", serialize_model(uniform_model(oracle::complete(3), 2, 1.0, equality_table(2))));
  const Run trwp = cli("estimate --model " + tri.string() + " --method trwp");
  CHECK(trwp.status == 0);
  CHECK(std::stod(field(trwp.out, "kappa")) == doctest::Approx(2.0 / 3).epsilon(1e-9));
  CHECK(field(trwp.out, "method") == "trwp");

  const Run uni = cli("estimate --model " + tri.string() + " --method uniform --epsilon 0.1 --delta 0.05 --seed 1");
  CHECK(uni.status == 0);
  CHECK(field(uni.out, "n") == "597");
  CHECK(uni.out == cli("estimate --model " + tri.string() +
                       " --method uniform --epsilon 0.1 --delta 0.05 --seed 1 --threads 3").out);

  const auto path = scratch("path.gm", serialize_model(uniform_model(oracle::path(5), 3, 0.7, equality_table(3))));
  const Run ex = cli("exact --model " + path.string());
  CHECK(ex.status == 0);
  CHECK(field(ex.out, "method") == "tree_sum_product");
  CHECK(field(cli("estimate --model " + path.string()).out, "phi_hat") == field(ex.out, "phi"));

  const auto gg = scratch("tri.gg", serialize_graph(oracle::complete(3)));
  const Run s1 = cli("sample --graph " + gg.string() + " --n 3 --seed 9");
  CHECK(s1.status == 0);
  CHECK(s1.out == cli("sample --graph " + gg.string() + " --n 3 --seed 9").out);
  CHECK(s1.out == cli("sample --graph " + gg.string() + " --n 3 --seed 9 --threads 2").out);

  const Run gen = cli("gen --family cycle --n 6");
  CHECK(gen.status == 0);
  CHECK(parse_graph(gen.out) == oracle::cycle(6));
  const Run gm = cli("gen --family grid --width 3 --height 2 --model --seed 4 --alphabet 3");
  CHECK(parse_model(gm.out).alphabet_size() == 3);
  CHECK(gm.out == cli("gen --family grid --width 3 --height 2 --model --seed 4 --alphabet 3").out);
}

TEST_CASE("cli bench and exit codes") {
  const Run empty = cli("bench --corpus ''");
  CHECK(empty.status == 0);
  CHECK(empty.out == bench_header(false));
  const Run small = cli("bench --corpus triangle,path:4 --check");
  CHECK(small.status == 0);
  CHECK(small.out.find("triangle\t") != std::string::npos);

  CHECK(cli("bench --corpus nonsense:1").status == 2);
  CHECK(cli("kappa").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("estimate --model /nonexistent/file.gm").status == 2);
  const auto broken = scratch("broken.gg", "ggraph 1\nnodes 2\nedge 0 5\n");
  CHECK(cli("kappa --graph " + broken.string()).status == 2);
  const auto tri = scratch("tri.gm", serialize_model(uniform_model(oracle::complete(3), 2, 1.0, equality_table(2))));
  CHECK(cli("estimate --model " + tri.string() + " --method uniform").status == 2);
  CHECK(cli("estimate --model " + tri.string() + " --method partition").status == 2);
  CHECK(cli("exact --model " + tri.string() + " --cap-configurations 4").status == 3);
}
