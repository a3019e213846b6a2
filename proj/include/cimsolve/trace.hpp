#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cimsolve/ising.hpp"

namespace cimsolve {

struct TracePoint {
  std::size_t step;  // 1-based iteration count at which this energy was first seen
  double energy;
};

/// Running best-so-far record, stored sparsely at change points.
class BestTrace {
 public:
  /// Returns true when `energy` improves on the current best.
  bool offer(std::size_t step, double energy, std::span<const Spin> spins) {
    if (!points_.empty() && !(energy < points_.back().energy)) return false;
    points_.push_back({step, energy});
    best_spins_.assign(spins.begin(), spins.end());
    return true;
  }

  bool empty() const noexcept { return points_.empty(); }
  const std::vector<TracePoint>& points() const noexcept { return points_; }
  double best_energy() const { return points_.back().energy; }
  std::size_t best_step() const { return points_.back().step; }
  const std::vector<Spin>& best_spins() const noexcept { return best_spins_; }

  /// First step at which the best energy is <= target, if any.
  std::optional<std::size_t> hit_step(double target) const {
    for (const TracePoint& p : points_) {
      if (p.energy <= target) return p.step;
    }
    return std::nullopt;
  }

 private:
  std::vector<TracePoint> points_;
  std::vector<Spin> best_spins_;
};

enum class RunStatus {
  completed,      // step budget exhausted
  target_reached, // stopped early at the requested energy
  settled,        // stopped early because the state stopped moving
  diverged,       // aborted on a non-finite or runaway state
};

std::string_view status_name(RunStatus s);

/// One sampled row of a trajectory dump. Closed-loop columns are NaN for
/// open-loop runs.
struct TrajectoryRow {
  std::size_t step;
  double t;
  double energy;       // energy of the rounded state
  double best_energy;
  double lyapunov;     // V = V_b + beta H at the current state
  double min_e = std::numeric_limits<double>::quiet_NaN();
  double max_e = std::numeric_limits<double>::quiet_NaN();
  double a_current = std::numeric_limits<double>::quiet_NaN();
  double divergence = std::numeric_limits<double>::quiet_NaN();
};

using TrajectorySink = std::function<void(const TrajectoryRow&)>;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for sub-stream `stream` of `master`: mix64(mix64(master) ^ stream).
/// Nesting gives independent streams per (instance, run).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(mix64(master) ^ stream);
}

/// 64-bit FNV-1a, used to key RNG streams on instance ids.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace cimsolve
