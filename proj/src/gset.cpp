#include "cimsolve/gset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "cimsolve/instance_io.hpp"

namespace cimsolve {
namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("G-set line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

std::size_t parse_count(std::string_view tok, std::size_t line, const char* what) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) fail(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  return v;
}

double parse_weight(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v)) {
    fail(line, "bad weight '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

GsetFile parse_gset(std::string_view text) {
  GsetFile out;
  std::size_t declared = 0;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok.size() != 2) fail(line_no, "header must be 'n m'");
      out.n = parse_count(tok[0], line_no, "vertex count");
      declared = parse_count(tok[1], line_no, "edge count");
      have_header = true;
      continue;
    }
    if (tok.size() != 3) fail(line_no, "edge line must be 'u v w'");
    GsetEdge e{parse_count(tok[0], line_no, "vertex"), parse_count(tok[1], line_no, "vertex"),
               parse_weight(tok[2], line_no), std::string(tok[2])};
    if (e.u == e.v) fail(line_no, "self-loop on vertex " + std::to_string(e.u));
    if (e.u < 1 || e.u > out.n || e.v < 1 || e.v > out.n) {
      fail(line_no, "vertex out of range [1, " + std::to_string(out.n) + "]");
    }
    if (e.u > e.v) fail(line_no, "endpoints must satisfy u < v");
    out.edges.push_back(std::move(e));
  }
  if (!have_header) throw FormatError("G-set: missing header");
  if (out.edges.size() != declared) {
    throw FormatError("G-set: header declares " + std::to_string(declared) + " edges but " +
                      std::to_string(out.edges.size()) + " were found");
  }
  return out;
}

std::string write_gset(const GsetFile& file) {
  std::ostringstream os;
  os << file.n << ' ' << file.edges.size() << '\n';
  for (const GsetEdge& e : file.edges) os << e.u << ' ' << e.v << ' ' << e.weight_text << '\n';
  return os.str();
}

WeightedGraph gset_graph(const GsetFile& file) {
  WeightedGraph g{file.n, {}};
  for (const GsetEdge& e : file.edges) g.edges.push_back({e.u - 1, e.v - 1, e.weight});
  return g;
}

}  // namespace cimsolve
