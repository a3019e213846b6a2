#include "cimsolve/openloop.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cimsolve/spectral.hpp"

namespace cimsolve {
namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double amplitude_bound(double pump, double beta, double row_sum, GainKind gain) {
  if (gain == GainKind::tanh_saturation) return 10.0 * (std::abs(pump) + std::abs(beta) * row_sum + 1.0);
  return 10.0 * std::sqrt(std::max(pump - 1.0, 1.0) + std::abs(beta) * row_sum);
}

}  // namespace

OpenLoopResult integrate_openloop(const IsingInstance& instance, const Nonlinearity& nonlinearity,
                                  const Schedule& schedule, std::uint64_t seed, const OpenLoopOptions& options) {
  schedule.validate();
  if (options.record_every == 0 || options.sink_every == 0) throw std::invalid_argument("cadence must be >= 1");
  const std::size_t n = instance.size();
  const std::size_t steps = schedule.steps();
  const double dt = schedule.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double row_sum = instance.max_row_sum();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  OpenLoopResult out;
  out.x.assign(n, 0.0);
  if (options.initial_state) {
    if (options.initial_state->size() != n) throw std::invalid_argument("initial state has wrong length");
    out.x = *options.initial_state;
  } else if (schedule.noise(0.0) == 0.0 && schedule.diffusion == 0.0) {
    std::uniform_real_distribution<double> tiny(-1e-6, 1e-6);
    for (double& v : out.x) v = tiny(rng);
  }

  std::vector<double> z(n), field(n), drift(n);
  std::vector<Spin> spins(n);
  std::vector<double> noise_draw(n);

  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k - 1) * dt;
    const Nonlinearity nl = nonlinearity.with_pump(schedule.pump(t));
    const double beta = schedule.beta(t);
    const double gamma = schedule.noise(t);

    if (gamma > 0.0) {
      for (std::size_t j = 0; j < n; ++j) z[j] = nl.g(out.x[j] + gamma * normal(rng));
    } else {
      for (std::size_t j = 0; j < n; ++j) z[j] = nl.g(out.x[j]);
    }
    instance.multiply(z, field);
    for (std::size_t i = 0; i < n; ++i) drift[i] = nl.f(out.x[i]) + beta * field[i];
    if (schedule.diffusion > 0.0) {
      for (std::size_t i = 0; i < n; ++i) noise_draw[i] = schedule.diffusion * sqrt_dt * normal(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += dt * drift[i] + (schedule.diffusion > 0.0 ? noise_draw[i] : 0.0);
    }
    out.t = static_cast<double>(k) * dt;
    out.steps = k;

    const double amp = max_abs(out.x);
    if (!std::isfinite(amp) || amp > amplitude_bound(nl.pump, beta, row_sum, nl.gain)) {
      std::ostringstream msg;
      msg << "open-loop state diverged at t = " << out.t << " (max|x| = " << amp << "); reduce dt";
      out.status = RunStatus::diverged;
      out.diagnostic = msg.str();
      break;
    }

    if (k % options.record_every == 0 || k == steps) {
      spins = round_spins(out.x);
      out.trace.offer(k, energy(instance, spins), spins);
    }
    if (options.sink && (k % options.sink_every == 0 || k == steps)) {
      options.sink({k, out.t, energy(instance, round_spins(out.x)), out.trace.best_energy(),
                    lyapunov_value(instance, nl, beta, out.x)});
    }
    if (options.stop_energy && !out.trace.empty() && out.trace.best_energy() <= *options.stop_energy) {
      out.status = RunStatus::target_reached;
      break;
    }
    if (options.settle_tolerance && max_abs(drift) < *options.settle_tolerance) {
      out.status = RunStatus::settled;
      break;
    }
  }
  if (out.trace.empty() || out.trace.points().back().step != out.steps) {
    // Make sure the final state is always scored, even on early exit.
    if (out.status != RunStatus::diverged) {
      spins = round_spins(out.x);
      out.trace.offer(out.steps, energy(instance, spins), spins);
    }
  }
  return out;
}

double threshold_gain(const IsingInstance& instance, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("threshold_gain: beta must be > 0");
  if (instance.size() < 2) throw std::invalid_argument("threshold_gain: n must be >= 2");
  return -beta * leading_eigenpair(instance).value;
}

ModeAlignment first_mode_alignment(const IsingInstance& instance, double beta, double eps, double dt,
                                   std::size_t max_steps) {
  if (!(eps > 0.0)) throw std::invalid_argument("first_mode_alignment: eps must be > 0");
  const EigenPair lead = leading_eigenpair(instance);
  const double a_star = -beta * lead.value;
  const double gain = a_star == 0.0 ? eps : a_star + eps * std::abs(a_star);
  const Nonlinearity nl{GainKind::cubic, FeedbackKind::identity, 1.0 + gain};

  const std::size_t n = instance.size();
  std::mt19937_64 rng(0x0f1257ULL);
  std::uniform_real_distribution<double> tiny(-1e-6, 1e-6);
  std::vector<double> x(n), field(n), drift(n);
  for (double& v : x) v = tiny(rng);

  std::size_t k = 0;
  for (; k < max_steps; ++k) {
    instance.multiply(x, field);
    for (std::size_t i = 0; i < n; ++i) drift[i] = nl.f(x[i]) + beta * field[i];
    if (max_abs(drift) < 1e-11 && max_abs(x) > 1e-4) break;
    for (std::size_t i = 0; i < n; ++i) x[i] += dt * drift[i];
    if (!std::isfinite(max_abs(x))) throw ConvergenceError("first_mode_alignment diverged", max_abs(x));
  }
  if (k == max_steps) throw ConvergenceError("first_mode_alignment did not settle", max_abs(drift));

  double dotv = 0.0, nx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dotv += x[i] * lead.vector[i];
    nx += x[i] * x[i];
  }
  return {round_spins(instance, x), std::abs(dotv) / std::sqrt(nx), gain, k};
}

double lyapunov_value(const IsingInstance& instance, const Nonlinearity& nonlinearity, double beta,
                      std::span<const double> x) {
  if (x.size() != instance.size()) throw std::invalid_argument("lyapunov_value: dimension mismatch");
  std::vector<double> y(x.size());
  double vb = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = nonlinearity.g(x[i]);
    vb += nonlinearity.bistable_potential(y[i]);
  }
  return vb + beta * quadratic_energy(instance, y);
}

FixedPointResidual fixed_point_residual(const IsingInstance& instance, const Nonlinearity& nonlinearity, double beta,
                                        std::span<const double> x, bool with_high_pump_gap) {
  const std::size_t n = instance.size();
  if (x.size() != n) throw std::invalid_argument("fixed_point_residual: dimension mismatch");
  std::vector<double> y(n), field(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = nonlinearity.g(x[i]);
  instance.multiply(y, field);
  double norm = 0.0, quartic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    norm = std::max(norm, std::abs(nonlinearity.f(x[i]) + beta * field[i]));
    quartic += x[i] * x[i] * x[i] * x[i];
  }
  const double v = lyapunov_value(instance, nonlinearity, beta, x);
  FixedPointResidual out{norm, std::abs(v + 0.25 * quartic), std::nullopt};
  if (with_high_pump_gap) {
    if (std::any_of(x.begin(), x.end(), [](double xi) { return xi == 0.0; })) {
      throw std::invalid_argument("high-pump comparison needs every amplitude nonzero");
    }
    const double a = nonlinearity.pump - 1.0;
    const double h = energy(instance, round_spins(x));
    out.high_pump_gap = v - (-static_cast<double>(n) * a * a / 4.0 + beta * a * h);
  }
  return out;
}

}  // namespace cimsolve
