#pragma once

// G-set graph files: a header "n m" followed by m lines "u v w" with
// 1-indexed endpoints u < v. Weights are kept as written so that parse and
// write round-trip byte for byte (modulo whitespace).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cimsolve/maxcut.hpp"

namespace cimsolve {

struct GsetEdge {
  std::size_t u;
  std::size_t v;
  double weight;
  std::string weight_text;
};

struct GsetFile {
  std::size_t n = 0;
  std::vector<GsetEdge> edges;
};

/// Throws FormatError naming the line for a malformed header or edge line,
/// an edge count different from the header, a self-loop, an out-of-range
/// vertex or u > v.
GsetFile parse_gset(std::string_view text);

/// Header line then one edge per line, single spaces, trailing newline.
std::string write_gset(const GsetFile& file);

/// 0-indexed weighted graph.
WeightedGraph gset_graph(const GsetFile& file);

}  // namespace cimsolve
