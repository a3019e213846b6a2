#pragma once

#include <cmath>

namespace cimsolve {

enum class GainKind {
  cubic,            // f(x) = (p - 1) x - x^3
  tanh_saturation,  // f(x) = -x + p tanh(x)
};

enum class FeedbackKind {
  identity,  // g(x) = x
  tanh,      // g(x) = tanh(x)
};

/// Gain-saturation term f and feedback readout g of the soft-spin dynamics
///
///     dx_i/dt = f(x_i) + beta * sum_j J_ij g(x_j).
///
/// `pump` is the dimensionless pump rate p; both f variants are odd with
/// f(0) = 0 and a pitchfork at p = 1.
struct Nonlinearity {
  GainKind gain = GainKind::cubic;
  FeedbackKind feedback = FeedbackKind::identity;
  double pump = 1.0;

  Nonlinearity with_pump(double p) const {
    Nonlinearity out = *this;
    out.pump = p;
    return out;
  }

  double f(double x) const {
    return gain == GainKind::cubic ? (pump - 1.0) * x - x * x * x : -x + pump * std::tanh(x);
  }
  double df(double x) const {
    if (gain == GainKind::cubic) return pump - 1.0 - 3.0 * x * x;
    const double c = std::cosh(x);
    return -1.0 + pump / (c * c);
  }
  double g(double x) const { return feedback == FeedbackKind::identity ? x : std::tanh(x); }
  double dg(double x) const {
    if (feedback == FeedbackKind::identity) return 1.0;
    const double t = std::tanh(x);
    return 1.0 - t * t;
  }
  /// Throws std::domain_error for |y| >= 1 under tanh feedback.
  double g_inverse(double y) const;

  /// Single-spin bistable potential -int_0^y f(g^{-1}(u)) du.
  double bistable_potential(double y) const;
};

}  // namespace cimsolve
