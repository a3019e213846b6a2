#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace cimsolve {

/// Piecewise-linear function of time, held constant outside its knots.
class Ramp {
 public:
  Ramp() : Ramp(constant(0.0)) {}
  /// Knots as (t, value), strictly increasing in t.
  explicit Ramp(std::vector<std::pair<double, double>> knots);

  static Ramp constant(double v) { return Ramp({{0.0, v}}); }
  static Ramp linear(double from, double to, double duration) { return Ramp({{0.0, from}, {duration, to}}); }

  double operator()(double t) const;
  double min_value() const;
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

/// Amplitude of the measurement noise on the feedback path.
struct NoiseSchedule {
  enum class Kind { constant, log_decay };
  Kind kind = Kind::constant;
  double gamma = 0.05;  // constant amplitude
  double c = 1.0;       // log_decay: gamma(t)^2 = c / log(2 + t)

  double operator()(double t) const;
};

struct Schedule {
  Ramp pump;
  Ramp beta;
  NoiseSchedule noise;
  double duration = 100.0;
  double dt = 0.01;
  /// Optional additive diffusion sqrt(dt) * sigma * N(0,1) on every x_i.
  double diffusion = 0.0;

  /// Defaults: p 0.5 -> 1.5 over the run, beta = 1, gamma = 0.05.
  static Schedule standard(double duration, double dt = 0.01);

  std::size_t steps() const;
  /// Throws std::invalid_argument when dt <= 0, duration < dt, or any noise
  /// amplitude is negative.
  void validate() const;
};

}  // namespace cimsolve
