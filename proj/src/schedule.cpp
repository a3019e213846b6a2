#include "cimsolve/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cimsolve {

Ramp::Ramp(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw std::invalid_argument("ramp needs at least one knot");
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (!(knots_[k].first > knots_[k - 1].first)) throw std::invalid_argument("ramp knots must increase in time");
  }
}

double Ramp::operator()(double t) const {
  if (t <= knots_.front().first) return knots_.front().second;
  if (t >= knots_.back().first) return knots_.back().second;
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const std::pair<double, double>& k) { return v < k.first; });
  const auto lo = hi - 1;
  const double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

double Ramp::min_value() const {
  double m = knots_.front().second;
  for (const auto& k : knots_) m = std::min(m, k.second);
  return m;
}

double NoiseSchedule::operator()(double t) const {
  if (kind == Kind::constant) return gamma;
  return std::sqrt(c / std::log(2.0 + t));
}

Schedule Schedule::standard(double duration, double dt) {
  Schedule s;
  s.pump = Ramp::linear(0.5, 1.5, duration);
  s.beta = Ramp::constant(1.0);
  s.duration = duration;
  s.dt = dt;
  return s;
}

std::size_t Schedule::steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

void Schedule::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("schedule: dt must be positive");
  if (!(duration >= dt)) throw std::invalid_argument("schedule: duration must be >= dt");
  if (noise.kind == NoiseSchedule::Kind::constant && !(noise.gamma >= 0.0)) {
    throw std::invalid_argument("schedule: noise amplitude must be >= 0");
  }
  if (noise.kind == NoiseSchedule::Kind::log_decay && !(noise.c >= 0.0)) {
    throw std::invalid_argument("schedule: log-decay constant must be >= 0");
  }
  if (!(diffusion >= 0.0)) throw std::invalid_argument("schedule: diffusion must be >= 0");
}

}  // namespace cimsolve
