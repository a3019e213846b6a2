#include "cimsolve/maxcut.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cimsolve {

MaxCutProblem maxcut_to_ising(const WeightedGraph& graph) {
  std::vector<Coupling> couplings;
  couplings.reserve(graph.edges.size());
  double total = 0.0;
  for (const WeightedEdge& e : graph.edges) {
    if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    couplings.push_back({e.u, e.v, -e.weight});
    total += e.weight;
  }
  // Range and duplicate checks happen in the instance constructor; a zero
  // weight edge is still a duplicate if repeated, so check that here too.
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  keys.reserve(graph.edges.size());
  for (const WeightedEdge& e : graph.edges) keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw std::invalid_argument("duplicate edge in graph");
  }
  return {IsingInstance(graph.vertices, couplings, "maxcut"), total};
}

double cut_value(const WeightedGraph& graph, std::span<const Spin> spins) {
  if (spins.size() != graph.vertices) throw std::invalid_argument("cut_value: dimension mismatch");
  double cut = 0.0;
  for (const WeightedEdge& e : graph.edges) {
    if (spins[e.u] != spins[e.v]) cut += e.weight;
  }
  return cut;
}

}  // namespace cimsolve
