#pragma once

// TAP mean-field iteration with the Onsager reaction term:
//
//     m_i <- tanh( beta sum_j J_ij m_j - beta^2 m_i^(old) sum_j J_ij^2 (1 - (m_j^(old'))^2) )
//
// The two variants differ only in which past iterates feed the reaction term:
//   bolthausen     m_i^{t-1} and m_j^t      (one-step memory, the usual AMP form)
//   paper_literal  m_i^{t-2} and m_j^{t-1}  (two-step memory)
// At a fixed point both reduce to the same equations.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cimsolve/ising.hpp"

namespace cimsolve {

enum class TapVariant { bolthausen, paper_literal };

std::string_view tap_variant_name(TapVariant v);
/// Throws std::invalid_argument for an unknown name.
TapVariant parse_tap_variant(std::string_view name);

struct TapState {
  std::vector<double> m_now;    // m^t
  std::vector<double> m_prev;   // m^{t-1}
  std::vector<double> m_prev2;  // m^{t-2}
  double beta = 0.0;
  TapVariant variant = TapVariant::bolthausen;
  std::size_t t = 0;
};

struct TapOptions {
  std::size_t max_iters = 1000;
  double tol = 1e-10;
  TapVariant variant = TapVariant::bolthausen;
  double damping = 0.0;  // m <- (1 - damping) m_new + damping m_old
  double init_spread = 0.1;
};

struct TapResult {
  TapState state;
  bool converged = false;
  std::size_t iterations = 0;
  /// max_i |Onsager term| on the last update.
  double onsager_max = 0.0;
  std::size_t saturations = 0;
};

/// One update of the state in place; returns max_i |m_new - m_now|.
double tap_step(const IsingInstance& instance, const IsingInstance& squared, TapState& state, double damping,
                double* onsager_max = nullptr, std::size_t* saturations = nullptr);

/// Instance with every coupling squared, the second matrix the Onsager term needs.
IsingInstance squared_couplings(const IsingInstance& instance);

/// Starts from m^0 ~ uniform(-spread, spread), m^{-1} = m^{-2} = 0. Throws
/// std::invalid_argument for tol <= 0 or damping outside [0, 1).
TapResult tap_run(const IsingInstance& instance, double beta, std::uint64_t seed, const TapOptions& options = {});

}  // namespace cimsolve
