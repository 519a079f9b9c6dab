#include "logpart/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "logpart/error.hpp"

namespace logpart {

PairwiseModel::PairwiseModel(Graph graph, int alphabet_size, std::vector<double> theta,
                             std::vector<std::vector<double>> potentials)
    : graph_(std::move(graph)), q_(alphabet_size), theta_(std::move(theta)), potentials_(std::move(potentials)) {
  if (q_ < 2) throw Error(Errc::invalid_alphabet, "alphabet size must be at least 2");
  const auto m = static_cast<std::size_t>(graph_.edge_count());
  if (theta_.size() != m || potentials_.size() != m)
    throw Error(Errc::invalid_argument, "theta/potentials must have one entry per edge");
  for (double t : theta_)
    if (!std::isfinite(t) || t < 0.0) throw Error(Errc::negative_weight, "theta must be finite and >= 0");
  const auto cells = static_cast<std::size_t>(q_ * q_);
  for (const auto& table : potentials_) {
    if (table.size() != cells) throw Error(Errc::invalid_argument, "potential table must have q*q entries");
    for (double x : table)
      if (!std::isfinite(x) || x < 0.0) throw Error(Errc::negative_weight, "potentials must be finite and >= 0");
  }
}

PairwiseModel PairwiseModel::with_theta(std::vector<double> theta) const {
  return PairwiseModel(graph_, q_, std::move(theta), potentials_);
}

namespace {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i > start) line.tokens.push_back(raw.substr(start, i - start));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(Errc code, const std::string& what, int line) { throw Error(code, what, line); }

long long parse_int(std::string_view tok, int line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    fail(Errc::malformed_input, "expected integer, got '" + std::string(tok) + "'", line);
  return value;
}

double parse_real(std::string_view tok, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value))
    fail(Errc::malformed_input, "expected finite real, got '" + std::string(tok) + "'", line);
  return value;
}

void expect_keyword(const Line& line, std::string_view key, std::size_t arity) {
  if (line.tokens[0] != key || line.tokens.size() != arity + 1)
    fail(Errc::malformed_input, "expected '" + std::string(key) + "' with " + std::to_string(arity) + " argument(s)",
         line.number);
}

struct EdgeRecord {
  Vertex u;
  Vertex v;
  double theta;
  std::vector<double> table;
  int line;
};

struct Header {
  std::string_view kind;
  int nodes;
  int alphabet;
  std::size_t next;
};

Header read_header(const std::vector<Line>& lines) {
  if (lines.empty()) throw Error(Errc::malformed_input, "empty document", 1);
  const Line& first = lines[0];
  if (first.tokens.size() != 2 || (first.tokens[0] != "gmodel" && first.tokens[0] != "ggraph"))
    fail(Errc::malformed_input, "expected header 'gmodel 1' or 'ggraph 1'", first.number);
  if (first.tokens[1] != "1") fail(Errc::malformed_input, "unsupported format version", first.number);
  Header h{first.tokens[0], 0, 0, 1};
  if (lines.size() < 2) fail(Errc::malformed_input, "missing 'nodes' line", first.number);
  expect_keyword(lines[1], "nodes", 1);
  long long n = parse_int(lines[1].tokens[1], lines[1].number);
  if (n < 1 || n > (1 << 24)) fail(Errc::malformed_input, "node count out of range", lines[1].number);
  h.nodes = static_cast<int>(n);
  h.next = 2;
  if (h.kind == "gmodel") {
    if (lines.size() < 3) fail(Errc::malformed_input, "missing 'alphabet' line", lines[1].number);
    expect_keyword(lines[2], "alphabet", 1);
    long long q = parse_int(lines[2].tokens[1], lines[2].number);
    if (q < 2) fail(Errc::invalid_alphabet, "alphabet size must be at least 2", lines[2].number);
    if (q > 4096) fail(Errc::invalid_alphabet, "alphabet size too large", lines[2].number);
    h.alphabet = static_cast<int>(q);
    h.next = 3;
  }
  return h;
}

std::pair<Vertex, Vertex> read_endpoints(const Line& line, int nodes) {
  long long a = parse_int(line.tokens[1], line.number);
  long long b = parse_int(line.tokens[2], line.number);
  if (a < 0 || b < 0 || a >= nodes || b >= nodes) fail(Errc::malformed_input, "vertex id out of range", line.number);
  if (a == b) fail(Errc::self_loop, "self-loop at vertex " + std::to_string(a), line.number);
  return {static_cast<Vertex>(std::min(a, b)), static_cast<Vertex>(std::max(a, b))};
}

// Sorts records into canonical order and reports the first repeated pair.
template <class Record>
void canonicalize(std::vector<Record>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const Record& a, const Record& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].u == records[i - 1].u && records[i].v == records[i - 1].v) {
      int line = std::max(records[i].line, records[i - 1].line);
      fail(Errc::duplicate_edge,
           "edge (" + std::to_string(records[i].u) + "," + std::to_string(records[i].v) + ") repeated", line);
    }
  }
}

struct GraphRecord {
  Vertex u;
  Vertex v;
  int line;
};

}  // namespace

PairwiseModel parse_model(std::string_view text) {
  auto lines = tokenize(text);
  Header h = read_header(lines);
  if (h.kind != "gmodel") fail(Errc::malformed_input, "expected a 'gmodel 1' document", lines[0].number);
  const auto cells = static_cast<std::size_t>(h.alphabet) * static_cast<std::size_t>(h.alphabet);

  std::vector<EdgeRecord> records;
  for (std::size_t i = h.next; i < lines.size(); ++i) {
    const Line& line = lines[i];
    expect_keyword(line, "edge", 3);
    EdgeRecord rec;
    std::tie(rec.u, rec.v) = read_endpoints(line, h.nodes);
    rec.theta = parse_real(line.tokens[3], line.number);
    if (rec.theta < 0.0) fail(Errc::negative_weight, "theta must be >= 0", line.number);
    rec.line = line.number;
    if (i + 1 >= lines.size()) fail(Errc::malformed_input, "edge without 'pot' line", line.number);
    const Line& pot = lines[++i];
    expect_keyword(pot, "pot", cells);
    rec.table.reserve(cells);
    for (std::size_t k = 1; k < pot.tokens.size(); ++k) {
      double x = parse_real(pot.tokens[k], pot.number);
      if (x < 0.0) fail(Errc::negative_weight, "potential entries must be >= 0", pot.number);
      rec.table.push_back(x);
    }
    records.push_back(std::move(rec));
  }
  canonicalize(records);

  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<double> theta;
  std::vector<std::vector<double>> tables;
  for (auto& rec : records) {
    edges.emplace_back(rec.u, rec.v);
    theta.push_back(rec.theta);
    tables.push_back(std::move(rec.table));
  }
  return PairwiseModel(Graph(h.nodes, std::move(edges)), h.alphabet, std::move(theta), std::move(tables));
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string serialize_model(const PairwiseModel& m) {
  std::string out = "gmodel 1\n";
  out += "nodes " + std::to_string(m.graph().node_count()) + "\n";
  out += "alphabet " + std::to_string(m.alphabet_size()) + "\n";
  for (EdgeId e = 0; e < m.graph().edge_count(); ++e) {
    const Edge& ed = m.graph().edge(e);
    out += "edge " + std::to_string(ed.u) + " " + std::to_string(ed.v) + " " +
           format_real(m.theta()[static_cast<std::size_t>(e)]) + "\npot";
    for (double x : m.potentials()[static_cast<std::size_t>(e)]) out += " " + format_real(x);
    out += "\n";
  }
  return out;
}

Graph parse_graph(std::string_view text) {
  auto lines = tokenize(text);
  Header h = read_header(lines);
  if (h.kind == "gmodel") return parse_model(text).graph();
  std::vector<GraphRecord> records;
  for (std::size_t i = h.next; i < lines.size(); ++i) {
    const Line& line = lines[i];
    expect_keyword(line, "edge", 2);
    auto [u, v] = read_endpoints(line, h.nodes);
    records.push_back({u, v, line.number});
  }
  canonicalize(records);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& r : records) edges.emplace_back(r.u, r.v);
  return Graph(h.nodes, std::move(edges));
}

std::string serialize_graph(const Graph& g) {
  std::string out = "ggraph 1\nnodes " + std::to_string(g.node_count()) + "\n";
  for (const Edge& e : g.edges()) out += "edge " + std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> equality_table(int q) {
  std::vector<double> t(static_cast<std::size_t>(q * q), 0.0);
  for (int x = 0; x < q; ++x) t[static_cast<std::size_t>(x * q + x)] = 1.0;
  return t;
}

std::vector<double> disagreement_table(int q) {
  std::vector<double> t(static_cast<std::size_t>(q * q), 1.0);
  for (int x = 0; x < q; ++x) t[static_cast<std::size_t>(x * q + x)] = 0.0;
  return t;
}

}  // namespace logpart
