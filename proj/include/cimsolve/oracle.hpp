#pragma once

// Exhaustive enumeration over all 2^n configurations. Used as ground truth
// for every solver on small instances.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cimsolve/ising.hpp"

namespace cimsolve {

inline constexpr std::size_t kOracleMaxSpins = 24;
inline constexpr std::size_t kMomentsMaxSpins = 20;

struct GroundTruth {
  double ground_energy = 0.0;
  /// Every minimizer, lexicographically ordered (-1 < +1). Stops growing at
  /// max_states; degeneracy still counts all of them.
  std::vector<SpinConfig> ground_states;
  std::size_t degeneracy = 0;
  bool truncated = false;
};

struct OracleOptions {
  std::size_t threads = 1;
  std::size_t max_states = 1u << 16;
};

/// Throws std::invalid_argument for n > 24.
GroundTruth exhaustive_ground_states(const IsingInstance& instance, const OracleOptions& options = {});

struct ExactMoments {
  double beta = 0.0;
  double log_z = 0.0;
  double mean_energy = 0.0;  // <H>
  std::vector<double> magnetizations;
};

/// Gibbs averages under exp(-beta H). n <= 20, beta >= 0.
ExactMoments exact_moments(const IsingInstance& instance, double beta);

/// Conditioning applied before the exact Gibbs average: at most one spin
/// pinned and/or one coupling deleted.
struct CavitySpec {
  std::optional<std::pair<std::size_t, Spin>> clamp;
  std::optional<std::pair<std::size_t, std::size_t>> removed_edge;
};

/// Magnetizations <s_i> of the conditioned Gibbs measure. The clamped spin
/// reports its pinned value. Throws std::invalid_argument for an index out
/// of range, a clamp value other than +/-1, or removing a coupling that is
/// not present.
std::vector<double> exact_cavity_magnetizations(const IsingInstance& instance, double beta, const CavitySpec& spec);

}  // namespace cimsolve
