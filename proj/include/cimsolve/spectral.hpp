#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cimsolve/ising.hpp"

namespace cimsolve {

/// Thrown when an iterative solver does not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, first non-negligible entry positive
  double residual = 0.0;       // ||J v - value v||_inf
  std::size_t iterations = 0;  // matrix-vector products
};

struct LanczosOptions {
  double tolerance = 1e-10;  // relative to max_row_sum(J)
  std::size_t max_basis = 300;
  std::size_t max_restarts = 20;
};

/// Largest algebraic eigenpair of J by Lanczos with full reorthogonalization.
///
/// Starts from a fixed pseudo-random vector; whenever the Krylov space
/// becomes invariant the basis is extended with another such direction, so
/// the whole spectrum stays reachable. The result is identical across runs.
EigenPair leading_eigenpair(const IsingInstance& instance, const LanczosOptions& options = {});

struct SpectralResult {
  double eigenvalue;
  std::vector<double> eigenvector;
  double residual;
  SpinConfig rounded;
};

/// Sign rounding of the leading eigenvector of J: the direction along which
/// the zero-amplitude state of the soft-spin dynamics first destabilizes.
SpectralResult eigenvector_rounding(const IsingInstance& instance, const LanczosOptions& options = {});

}  // namespace cimsolve
