#pragma once

// Small fixtures and a deliberately naive brute-force enumerator shared by
// the unit tests.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "cimsolve/ising.hpp"
#include "cimsolve/maxcut.hpp"

namespace testing {

using cimsolve::Coupling;
using cimsolve::IsingInstance;
using cimsolve::Spin;

inline IsingInstance ferro_pair(double j = 1.0) {
  const Coupling c[] = {{0, 1, j}};
  return IsingInstance(2, c, "pair");
}

inline IsingInstance triangle(double j = -1.0) {
  const Coupling c[] = {{0, 1, j}, {0, 2, j}, {1, 2, j}};
  return IsingInstance(3, c, "triangle");
}

inline IsingInstance path(std::size_t n, double j = 1.0) {
  std::vector<Coupling> c;
  for (std::size_t i = 0; i + 1 < n; ++i) c.push_back({i, i + 1, j});
  return IsingInstance(n, c, "path");
}

inline std::vector<Spin> spins_of(std::uint64_t bits, std::size_t n) {
  std::vector<Spin> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i) & 1U ? Spin{1} : Spin{-1};
  return s;
}

// Energy straight from the dense matrix, no shared code with the library.
inline double naive_energy(const IsingInstance& inst, const std::vector<Spin>& s) {
  const std::vector<double> j = inst.to_dense();
  const std::size_t n = inst.size();
  double e = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) e -= 0.5 * j[a * n + b] * s[a] * s[b];
  return e;
}

struct Naive {
  double ground = std::numeric_limits<double>::infinity();
  std::size_t degeneracy = 0;
};

inline Naive naive_ground(const IsingInstance& inst, double tol = 1e-9) {
  Naive out;
  const std::size_t n = inst.size();
  std::vector<double> energies(std::size_t{1} << n);
  for (std::uint64_t b = 0; b < energies.size(); ++b) {
    energies[b] = naive_energy(inst, spins_of(b, n));
    out.ground = std::min(out.ground, energies[b]);
  }
  for (double e : energies) out.degeneracy += e <= out.ground + tol;
  return out;
}

// Naive Gibbs magnetizations with an optional pinned spin.
inline std::vector<double> naive_magnetizations(const IsingInstance& inst, double beta, int clamp_index = -1,
                                                Spin clamp_value = 1) {
  const std::size_t n = inst.size();
  std::vector<double> m(n, 0.0);
  double z = 0.0;
  const double shift = naive_ground(inst).ground;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    const auto s = spins_of(b, n);
    if (clamp_index >= 0 && s[static_cast<std::size_t>(clamp_index)] != clamp_value) continue;
    const double w = std::exp(-beta * (naive_energy(inst, s) - shift));
    z += w;
    for (std::size_t i = 0; i < n; ++i) m[i] += w * s[i];
  }
  for (double& v : m) v /= z;
  return m;
}

// Random labelled tree on n vertices (random parent for each vertex), with
// couplings drawn from {+-1, +-0.5}.
inline IsingInstance random_tree(std::size_t n, std::mt19937_64& rng) {
  static constexpr double kValues[] = {1.0, -1.0, 0.5, -0.5};
  std::vector<Coupling> c;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    std::uniform_int_distribution<int> pick(0, 3);
    c.push_back({parent(rng), v, kValues[pick(rng)]});
  }
  return IsingInstance(n, c, "tree");
}

// Longest shortest path, by BFS from every vertex.
inline std::size_t diameter(const IsingInstance& inst) {
  const std::size_t n = inst.size();
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> dist(n, static_cast<std::size_t>(-1));
    std::vector<std::size_t> queue{s};
    dist[s] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (const auto& nb : inst.neighbors(queue[q])) {
        if (dist[nb.index] == static_cast<std::size_t>(-1)) {
          dist[nb.index] = dist[queue[q]] + 1;
          best = std::max(best, dist[nb.index]);
          queue.push_back(nb.index);
        }
      }
    }
  }
  return best;
}

inline cimsolve::WeightedGraph random_graph(std::size_t n, double density, std::mt19937_64& rng, bool integer) {
  cimsolve::WeightedGraph g{n, {}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> w(1, 9);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (u(rng) < density) g.edges.push_back({a, b, integer ? static_cast<double>(w(rng)) : u(rng) * 4.0 - 1.0});
  return g;
}

}  // namespace testing
