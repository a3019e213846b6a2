#pragma once

// Open-loop soft-spin dynamics:
//
//     dx_i = [ f(x_i) + beta(t) sum_j J_ij g(x_j + gamma(t) eta_j) ] dt
//
// integrated by explicit Euler-Maruyama, with the pump p(t), the coupling
// beta(t) and the noise gamma(t) following a Schedule. eta_j is a fresh
// standard normal per step and per spin (measurement noise on the feedback
// path). Without noise this is gradient descent on V = V_b(g(x)) + beta H(g(x)).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cimsolve/ising.hpp"
#include "cimsolve/nonlinearity.hpp"
#include "cimsolve/schedule.hpp"
#include "cimsolve/trace.hpp"

namespace cimsolve {

struct OpenLoopOptions {
  /// Defaults to the origin, or to a seeded 1e-6 perturbation when the run
  /// is noiseless.
  std::optional<std::vector<double>> initial_state;
  std::size_t record_every = 1;
  std::optional<double> stop_energy;
  /// Stop once max_i |dx_i/dt| drops below this (noiseless runs only make
  /// sense here).
  std::optional<double> settle_tolerance;
  TrajectorySink sink;
  std::size_t sink_every = 1;
};

struct OpenLoopResult {
  std::vector<double> x;
  double t = 0.0;
  std::size_t steps = 0;
  BestTrace trace;
  RunStatus status = RunStatus::completed;
  std::string diagnostic;
};

/// Deterministic for a given (instance, schedule, seed) on one ISA. The
/// `pump` field of `nonlinearity` is ignored; the schedule drives it.
OpenLoopResult integrate_openloop(const IsingInstance& instance, const Nonlinearity& nonlinearity,
                                  const Schedule& schedule, std::uint64_t seed, const OpenLoopOptions& options = {});

/// Gain a* = -beta * lambda_max(J) at which the origin of dx = a x + beta J x
/// loses stability.
double threshold_gain(const IsingInstance& instance, double beta);

struct ModeAlignment {
  SpinConfig spins;
  double overlap;  // |cos| between the settled x and the leading eigenvector
  double gain;     // a used for the run
  std::size_t steps;
};

/// Runs the noiseless cubic dynamics just past threshold, a = a* + eps |a*|
/// (or eps when a* = 0), from a tiny fixed perturbation until the amplitudes
/// settle. Throws ConvergenceError when the step budget runs out.
ModeAlignment first_mode_alignment(const IsingInstance& instance, double beta, double eps = 0.02,
                                   double dt = 0.01, std::size_t max_steps = 4'000'000);

/// V = sum_i V_b(y_i) + beta H(y), y = g(x).
double lyapunov_value(const IsingInstance& instance, const Nonlinearity& nonlinearity, double beta,
                      std::span<const double> x);

struct FixedPointResidual {
  double field_norm;           // || f(x) + beta J g(x) ||_inf
  double energy_identity_gap;  // | V(x) + 1/4 sum x_i^4 |
  /// V(x) - (-n a^2/4 + beta a H(sign x)), a = p - 1: the large-pump
  /// expansion, reported for inspection only.
  std::optional<double> high_pump_gap;
};

/// The identity gap is exact only for cubic gain with identity feedback.
/// Requesting the high-pump diagnostic with some x_i == 0 throws
/// std::invalid_argument.
FixedPointResidual fixed_point_residual(const IsingInstance& instance, const Nonlinearity& nonlinearity, double beta,
                                        std::span<const double> x, bool with_high_pump_gap = false);

}  // namespace cimsolve
