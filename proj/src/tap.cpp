#include "cimsolve/tap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "cimsolve/belief_propagation.hpp"

namespace cimsolve {

std::string_view tap_variant_name(TapVariant v) {
  return v == TapVariant::bolthausen ? "bolthausen" : "paper_literal";
}

TapVariant parse_tap_variant(std::string_view name) {
  if (name == "bolthausen") return TapVariant::bolthausen;
  if (name == "paper_literal") return TapVariant::paper_literal;
  throw std::invalid_argument("unknown TAP variant '" + std::string(name) + "'");
}

IsingInstance squared_couplings(const IsingInstance& instance) {
  std::vector<Coupling> sq = instance.edges();
  for (Coupling& c : sq) c.value *= c.value;
  return IsingInstance(instance.size(), sq, instance.label() + "-squared");
}

double tap_step(const IsingInstance& instance, const IsingInstance& squared, TapState& state, double damping,
                double* onsager_max, std::size_t* saturations) {
  const std::size_t n = instance.size();
  const bool literal = state.variant == TapVariant::paper_literal;
  const std::vector<double>& self_mem = literal ? state.m_prev2 : state.m_prev;
  const std::vector<double>& nbr_mem = literal ? state.m_prev : state.m_now;

  std::vector<double> field(n), one_minus(n), reaction(n), next(n);
  instance.multiply(state.m_now, field);
  for (std::size_t j = 0; j < n; ++j) one_minus[j] = 1.0 - nbr_mem[j] * nbr_mem[j];
  squared.multiply(one_minus, reaction);

  const double b = state.beta;
  double change = 0.0, onsager = 0.0;
  std::size_t sat = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = b * b * self_mem[i] * reaction[i];
    onsager = std::max(onsager, std::abs(term));
    double v = std::tanh(b * field[i] - term);
    if (damping > 0.0) v = (1.0 - damping) * v + damping * state.m_now[i];
    if (std::abs(v) > kMessageCap) {
      v = std::copysign(kMessageCap, v);
      ++sat;
    }
    next[i] = v;
    change = std::max(change, std::abs(v - state.m_now[i]));
  }
  state.m_prev2 = std::move(state.m_prev);
  state.m_prev = std::move(state.m_now);
  state.m_now = std::move(next);
  ++state.t;
  if (onsager_max) *onsager_max = onsager;
  if (saturations) *saturations += sat;
  return change;
}

TapResult tap_run(const IsingInstance& instance, double beta, std::uint64_t seed, const TapOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tap: tol must be > 0");
  if (!(options.damping >= 0.0 && options.damping < 1.0)) throw std::invalid_argument("tap: damping must lie in [0, 1)");
  const std::size_t n = instance.size();
  TapResult out;
  TapState& st = out.state;
  st.beta = beta;
  st.variant = options.variant;
  st.m_now.resize(n);
  st.m_prev.assign(n, 0.0);
  st.m_prev2.assign(n, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-options.init_spread, options.init_spread);
  for (double& v : st.m_now) v = dist(rng);

  const IsingInstance sq = squared_couplings(instance);
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    const double change = tap_step(instance, sq, st, options.damping, &out.onsager_max, &out.saturations);
    out.iterations = it;
    if (change < options.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace cimsolve
