#pragma once

// Linear stability of closed-loop fixed points.
//
// At the fixed point built on a strict local minimum s, the 2n x 2n Jacobian
// of the (x, e) flow splits into one 2x2 block per eigenvalue mu of
// M = {J_ij / |h_i|}. Each block has trace f'(X) + c mu (c > 0) and a
// positive determinant, so a mode is unstable (contributing two eigenvalues
// with positive real part) exactly when mu > F(a), where
//
//     F(a) = f'(X) sqrt(a) / (g'(X) f(X)),   X = g^{-1}(sqrt(a)).
//
// s itself is always an eigenvector of M with mu = 1.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cimsolve/closedloop.hpp"
#include "cimsolve/ising.hpp"

namespace cimsolve {

/// Analytic Jacobian of (dx/dt, de/dt) with respect to (x, e), row-major
/// blocks [[dxdx, dxde], [dedx, dede]].
Eigen::MatrixXd closedloop_jacobian(const IsingInstance& instance, const ClosedLoopParams& params,
                                    std::span<const double> x, std::span<const double> e, double a);

/// Central finite-difference Jacobian, step `h` scaled by max(1, |coordinate|).
Eigen::MatrixXd closedloop_jacobian_fd(const IsingInstance& instance, const ClosedLoopParams& params,
                                       std::span<const double> x, std::span<const double> e, double a,
                                       double h = 1e-6);

struct StabilityEntry {
  double target;
  std::size_t n_unstable;                 // eigenvalues with Re > 0
  std::vector<std::complex<double>> eigenvalues;
};

/// Dimension of the unstable manifold of the fixed point on `spins` at the
/// target params.target. Propagates construct_fixed_point errors.
StabilityEntry unstable_dimension(const IsingInstance& instance, std::span<const Spin> spins,
                                  const ClosedLoopParams& params);

/// Eigenvalues of {J_ij / |h_i|} via the similar symmetric matrix
/// D^{-1/2} J D^{-1/2}, sorted descending. Throws std::invalid_argument if
/// some h_i = 0.
std::vector<double> mu_spectrum(const IsingInstance& instance, std::span<const Spin> spins);

/// Eigenvalues of the non-symmetric M computed directly (general solver),
/// sorted by descending real part. Used to cross-check mu_spectrum.
std::vector<std::complex<double>> mu_spectrum_general(const IsingInstance& instance, std::span<const Spin> spins);

/// F(a) above for the given nonlinearity; +inf when the fixed point does not
/// exist at this a (f(X) >= 0).
double instability_threshold(const Nonlinearity& nonlinearity, double a);

struct StabilityReport {
  SpinConfig spins;
  std::vector<double> mu;
  std::vector<std::pair<double, std::size_t>> n_unstable;  // (a, N_u)
};

/// mu spectrum plus N_u over a sweep of targets (params.target is replaced by
/// each entry of `targets`).
StabilityReport stability_report(const IsingInstance& instance, std::span<const Spin> spins,
                                 const ClosedLoopParams& params, std::span<const double> targets);

}  // namespace cimsolve
