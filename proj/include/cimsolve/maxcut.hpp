#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cimsolve/ising.hpp"

namespace cimsolve {

struct WeightedEdge {
  std::size_t u;
  std::size_t v;
  double weight;
};

/// Undirected weighted graph with 0-indexed vertices.
struct WeightedGraph {
  std::size_t vertices = 0;
  std::vector<WeightedEdge> edges;
};

/// MAXCUT as Ising minimization: J_uv = -w_uv and
///
///     cut(s) = (W - H(s)) / 2,   W = sum of all edge weights,
///
/// so the ground state of H is a maximum cut.
struct MaxCutProblem {
  IsingInstance instance;
  double total_weight;
};

/// Throws std::invalid_argument on self-loops, duplicate edges or
/// out-of-range endpoints.
MaxCutProblem maxcut_to_ising(const WeightedGraph& graph);

/// Direct sum of weights over edges whose endpoints disagree.
double cut_value(const WeightedGraph& graph, std::span<const Spin> spins);

inline double cut_from_energy(double total_weight, double ising_energy) {
  return 0.5 * (total_weight - ising_energy);
}

}  // namespace cimsolve
