#pragma once

// Ensemble metrics over benchmark records: success probability p0(n),
// iterations-to-solution n_s and nearest-rank percentiles.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cimsolve/trace.hpp"

namespace cimsolve {

inline constexpr double kDefaultSuccessTolerance = 1e-9;
inline constexpr double kDefaultPercentiles[] = {50.0, 80.0, 90.0};

struct BenchRecord {
  std::string instance_id;
  std::string solver_id;
  std::uint64_t seed = 0;
  std::size_t run = 0;
  std::vector<TracePoint> trace;  // best energy at change points, non-increasing
  double ground_energy = 0.0;     // success target
  std::size_t steps = 0;          // steps actually executed
  std::string status;

  /// First step whose best energy is within `rel_tol` of the target.
  std::optional<std::size_t> hit_step(double rel_tol = kDefaultSuccessTolerance) const;
  double best_energy() const;
};

/// Energy counted as a hit: target + rel_tol * max(1, |target|).
double success_threshold(double target, double rel_tol = kDefaultSuccessTolerance);

struct SuccessCurve {
  std::vector<std::size_t> n_grid;
  std::vector<double> p0;
};

/// p0(n) = mean over instances of the fraction of that instance's runs that
/// hit by step n. Throws std::invalid_argument for empty records or grid.
SuccessCurve success_probability(std::span<const BenchRecord> records, std::span<const std::size_t> n_grid,
                                 double rel_tol = kDefaultSuccessTolerance);

/// Every distinct hit step plus the largest step budget seen, ascending.
std::vector<std::size_t> default_grid(std::span<const BenchRecord> records, double rel_tol = kDefaultSuccessTolerance);

/// n log(0.01) / log(1 - p0); n when p0 == 1, +inf when p0 == 0.
double restarts_to_solution(std::size_t n, double p0);

/// min over the grid of restarts_to_solution; +inf when nothing was attained.
double iterations_to_solution(const SuccessCurve& curve);

/// Nearest-rank: the value of rank ceil(p/100 * N) in the sorted input
/// (rank 1 for p = 0). Throws std::invalid_argument for empty input,
/// non-finite values or p outside [0, 100].
std::vector<double> percentiles(std::span<const double> values, std::span<const double> ps);

struct NsSummary {
  std::map<std::string, double> per_instance;  // instance id -> n_s (may be inf)
  std::vector<double> ps;
  std::vector<double> percentile_values;       // over the finite n_s only; empty if none
  double attainment = 0.0;                     // fraction of instances with finite n_s
};

NsSummary summarize_ns(std::span<const BenchRecord> records, std::span<const double> ps = kDefaultPercentiles,
                       double rel_tol = kDefaultSuccessTolerance);

}  // namespace cimsolve
