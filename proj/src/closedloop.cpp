#include "cimsolve/closedloop.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cimsolve/openloop.hpp"

namespace cimsolve {
namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// log e beyond this would overflow exp() in the coupling term.
constexpr double kLogEMax = 600.0;

}  // namespace

void ClosedLoopParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("closed loop: beta must be > 0");
  if (!(xi > 0.0)) throw std::invalid_argument("closed loop: xi must be > 0");
  if (!(target > 0.0)) throw std::invalid_argument("closed loop: target amplitude a must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("closed loop: dt must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("closed loop: gamma must be >= 0");
  if (!(initial_spread >= 0.0)) throw std::invalid_argument("closed loop: initial spread must be >= 0");
  if (modulation == Modulation::divergence_positive && !(epsilon > 0.0)) {
    throw std::invalid_argument("closed loop: epsilon must be > 0 with divergence modulation");
  }
}

std::vector<double> ClosedLoopState::e() const {
  std::vector<double> out(log_e.size());
  std::transform(log_e.begin(), log_e.end(), out.begin(), [](double v) { return std::exp(v); });
  return out;
}

double divergence_xe(const ClosedLoopParams& params, std::span<const double> x, double a) {
  const Nonlinearity& nl = params.nonlinearity;
  double fp = 0.0, excess = 0.0;
  for (double xi : x) {
    fp += nl.df(xi);
    const double y = nl.g(xi);
    excess += y * y - a;
  }
  return fp - params.xi * excess;
}

double divergence_log(const ClosedLoopParams& params, std::span<const double> x) {
  double fp = 0.0;
  for (double xi : x) fp += params.nonlinearity.df(xi);
  return fp;
}

double update_target(const ClosedLoopParams& params, std::span<const double> x) {
  const Nonlinearity& nl = params.nonlinearity;
  double g2 = 0.0, fp = 0.0;
  for (double xi : x) {
    const double y = nl.g(xi);
    g2 += y * y;
    fp += nl.df(xi);
  }
  const double n = static_cast<double>(x.size());
  return std::max(params.target, (params.xi * g2 - fp + params.epsilon) / (params.xi * n));
}

void closedloop_field(const IsingInstance& instance, const ClosedLoopParams& params, std::span<const double> x,
                      std::span<const double> e, double a, std::span<double> dx, std::span<double> de) {
  const std::size_t n = instance.size();
  if (x.size() != n || e.size() != n || dx.size() != n || de.size() != n) {
    throw std::invalid_argument("closedloop_field: dimension mismatch");
  }
  const Nonlinearity& nl = params.nonlinearity;
  std::vector<double> y(n), field(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = nl.g(x[i]);
  instance.multiply(y, field);
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = nl.f(x[i]) + params.beta * e[i] * field[i];
    de[i] = -params.xi * (y[i] * y[i] - a) * e[i];
  }
}

ClosedLoopResult integrate_closedloop(const IsingInstance& instance, const ClosedLoopParams& params,
                                      std::size_t steps, std::uint64_t seed, const ClosedLoopOptions& options) {
  params.validate();
  if (options.record_every == 0 || options.sink_every == 0) throw std::invalid_argument("cadence must be >= 1");
  const std::size_t n = instance.size();
  const Nonlinearity& nl = params.nonlinearity;
  const double dt = params.dt;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  ClosedLoopResult out;
  ClosedLoopState& st = out.state;
  st.x.assign(n, 0.0);
  st.log_e.assign(n, 0.0);
  if (options.initial_x) {
    if (options.initial_x->size() != n) throw std::invalid_argument("initial x has wrong length");
    st.x = *options.initial_x;
  } else {
    std::uniform_real_distribution<double> spread(-params.initial_spread, params.initial_spread);
    for (double& v : st.x) v = spread(rng);
  }
  if (options.initial_e) {
    if (options.initial_e->size() != n) throw std::invalid_argument("initial e has wrong length");
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*options.initial_e)[i] > 0.0)) throw std::invalid_argument("initial e must be positive");
      st.log_e[i] = std::log((*options.initial_e)[i]);
    }
  }
  const bool modulated = params.modulation == Modulation::divergence_positive;
  st.a_current = modulated ? update_target(params, st.x) : params.target;

  std::vector<double> z(n), field(n), dx(n), dlog(n);
  std::vector<Spin> spins(n);

  for (std::size_t k = 1; k <= steps; ++k) {
    if (params.gamma > 0.0) {
      for (std::size_t j = 0; j < n; ++j) z[j] = nl.g(st.x[j] + params.gamma * normal(rng));
    } else {
      for (std::size_t j = 0; j < n; ++j) z[j] = nl.g(st.x[j]);
    }
    instance.multiply(z, field);
    double max_de = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::exp(st.log_e[i]);
      const double y = nl.g(st.x[i]);
      dx[i] = nl.f(st.x[i]) + params.beta * e * field[i];
      dlog[i] = -params.xi * (y * y - st.a_current);
      max_de = std::max(max_de, std::abs(dlog[i] * e));
    }
    for (std::size_t i = 0; i < n; ++i) {
      st.x[i] += dt * dx[i];
      st.log_e[i] += dt * dlog[i];
    }
    st.t = static_cast<double>(k) * dt;
    out.steps = k;

    if (modulated) {
      st.a_current = update_target(params, st.x);
      out.min_divergence = std::min(out.min_divergence, divergence_xe(params, st.x, st.a_current));
    }

    const double amp = max_abs(st.x);
    const double log_e_max = *std::max_element(st.log_e.begin(), st.log_e.end());
    const double bound = 10.0 * std::sqrt(std::max({nl.pump - 1.0, 1.0, st.a_current}));
    if (!std::isfinite(amp) || !std::isfinite(log_e_max) || amp > bound || log_e_max > kLogEMax) {
      std::ostringstream msg;
      msg << "closed-loop state diverged at t = " << st.t << " (max|x| = " << amp << ", max log e = " << log_e_max
          << ", a = " << st.a_current << ")";
      out.status = RunStatus::diverged;
      out.diagnostic = msg.str();
      break;
    }

    if (k % options.record_every == 0 || k == steps) {
      spins = round_spins(st.x);
      out.trace.offer(k, energy(instance, spins), spins);
    }
    if (options.sink && (k % options.sink_every == 0 || k == steps)) {
      const auto [lo, hi] = std::minmax_element(st.log_e.begin(), st.log_e.end());
      TrajectoryRow row{k, st.t, energy(instance, round_spins(st.x)), out.trace.best_energy(),
                        lyapunov_value(instance, nl, params.beta, st.x)};
      row.min_e = std::exp(*lo);
      row.max_e = std::exp(*hi);
      row.a_current = st.a_current;
      row.divergence = divergence_xe(params, st.x, st.a_current);
      options.sink(row);
    }
    if (options.stop_energy && !out.trace.empty() && out.trace.best_energy() <= *options.stop_energy) {
      out.status = RunStatus::target_reached;
      break;
    }
    if (options.settle_tolerance && max_abs(dx) < *options.settle_tolerance && max_de < *options.settle_tolerance) {
      out.status = RunStatus::settled;
      break;
    }
  }
  if (out.status != RunStatus::diverged && (out.trace.empty() || out.trace.points().back().step != out.steps)) {
    spins = round_spins(st.x);
    out.trace.offer(out.steps, energy(instance, spins), spins);
  }
  return out;
}

FixedPoint construct_fixed_point(const IsingInstance& instance, std::span<const Spin> spins,
                                 const ClosedLoopParams& params) {
  params.validate();
  const std::vector<double> h = local_fields(instance, spins);
  const std::size_t n = instance.size();
  const Nonlinearity& nl = params.nonlinearity;
  const double root_a = std::sqrt(params.target);

  FixedPoint fp{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spins[i] * h[i] > 0.0)) {
      throw std::invalid_argument("not a strict local minimum: s_i h_i = " + std::to_string(spins[i] * h[i]) +
                                  " at spin " + std::to_string(i));
    }
    fp.x[i] = nl.g_inverse(spins[i] * root_a);
    fp.e[i] = -nl.f(fp.x[i]) / (params.beta * root_a * h[i]);
    if (!(fp.e[i] > 0.0)) {
      throw std::invalid_argument("no positive error variable at spin " + std::to_string(i) + " (e_i = " +
                                  std::to_string(fp.e[i]) + "); target amplitude too small for this pump");
    }
  }
  std::vector<double> dx(n), de(n);
  closedloop_field(instance, params, fp.x, fp.e, params.target, dx, de);
  const double scale = 1.0 + max_abs(fp.e);
  const double residual = std::max(max_abs(dx), max_abs(de));
  if (residual > 1e-10 * scale) {
    throw std::runtime_error("constructed fixed point has residual " + std::to_string(residual));
  }
  return fp;
}

}  // namespace cimsolve
