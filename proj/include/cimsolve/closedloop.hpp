#pragma once

// Closed-loop soft-spin dynamics with amplitude-heterogeneity correction:
//
//     dx_i/dt     = f(x_i) + beta e_i sum_j J_ij g(x_j)
//     d log e_i/dt = -xi (g(x_i)^2 - a)
//
// The error variables e_i scale each spin's coupling until every squared
// amplitude sits at the target a. Fixed points exist only at local minima
// of H; choosing a so those fixed points are unstable turns the flow into a
// chaotic search over low-energy configurations. e is integrated in log
// space, so it stays positive for any step size.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cimsolve/ising.hpp"
#include "cimsolve/nonlinearity.hpp"
#include "cimsolve/trace.hpp"

namespace cimsolve {

enum class Modulation {
  static_target,
  /// Raise a whenever needed so the phase-space divergence stays >= epsilon.
  divergence_positive,
};

struct ClosedLoopParams {
  Nonlinearity nonlinearity{GainKind::cubic, FeedbackKind::identity, 0.0};
  double beta = 0.3;
  double xi = 0.3;
  double target = 0.1;  // a (squared target amplitude)
  Modulation modulation = Modulation::static_target;
  double epsilon = 0.1;
  double dt = 0.1;
  double gamma = 0.0;           // measurement noise on g(x_j); off by default
  double initial_spread = 1e-3; // x_i(0) ~ U(-spread, spread)

  /// Throws std::invalid_argument unless beta, xi, target, dt > 0 and
  /// epsilon > 0 when modulation is active.
  void validate() const;
};

struct ClosedLoopState {
  std::vector<double> x;
  std::vector<double> log_e;
  double a_current = 0.0;
  double t = 0.0;

  std::vector<double> e() const;
};

struct ClosedLoopOptions {
  /// Overrides the seeded start (x) and the e = 1 start (e must be > 0).
  std::optional<std::vector<double>> initial_x;
  std::optional<std::vector<double>> initial_e;
  std::size_t record_every = 1;
  std::optional<double> stop_energy;
  /// Stop when max|dx/dt| and max|de/dt| both fall below this.
  std::optional<double> settle_tolerance;
  TrajectorySink sink;
  std::size_t sink_every = 1;
};

struct ClosedLoopResult {
  ClosedLoopState state;
  std::size_t steps = 0;
  BestTrace trace;
  RunStatus status = RunStatus::completed;
  std::string diagnostic;
  /// Smallest (x, e)-coordinate divergence seen right after a target update.
  double min_divergence = std::numeric_limits<double>::infinity();
};

ClosedLoopResult integrate_closedloop(const IsingInstance& instance, const ClosedLoopParams& params,
                                      std::size_t steps, std::uint64_t seed, const ClosedLoopOptions& options = {});

/// Divergence of the vector field in (x, e) coordinates:
/// sum_i f'(x_i) - xi sum_i (g(x_i)^2 - a).
double divergence_xe(const ClosedLoopParams& params, std::span<const double> x, double a);
/// Divergence in (x, log e) coordinates: sum_i f'(x_i).
double divergence_log(const ClosedLoopParams& params, std::span<const double> x);

/// max(a_base, (xi sum g^2 - sum f' + epsilon) / (xi n)), the smallest target
/// that keeps divergence_xe >= epsilon.
double update_target(const ClosedLoopParams& params, std::span<const double> x);

struct FixedPoint {
  std::vector<double> x;
  std::vector<double> e;
};

/// x_i = g^{-1}(s_i sqrt(a)), e_i = -f(x_i) / (beta sqrt(a) h_i). Throws
/// std::invalid_argument if `spins` is not a strict local minimum or some
/// e_i would be non-positive (the message names the index).
FixedPoint construct_fixed_point(const IsingInstance& instance, std::span<const Spin> spins,
                                 const ClosedLoopParams& params);

/// (dx/dt, de/dt) at a state with target a.
void closedloop_field(const IsingInstance& instance, const ClosedLoopParams& params, std::span<const double> x,
                      std::span<const double> e, double a, std::span<double> dx, std::span<double> de);

}  // namespace cimsolve
