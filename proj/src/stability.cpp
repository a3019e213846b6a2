#include "cimsolve/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cimsolve {
namespace {

std::vector<double> abs_fields(const IsingInstance& instance, std::span<const Spin> spins) {
  std::vector<double> h = local_fields(instance, spins);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == 0.0) throw std::invalid_argument("local field vanishes at spin " + std::to_string(i));
    h[i] = std::abs(h[i]);
  }
  return h;
}

}  // namespace

Eigen::MatrixXd closedloop_jacobian(const IsingInstance& instance, const ClosedLoopParams& params,
                                    std::span<const double> x, std::span<const double> e, double a) {
  const std::size_t n = instance.size();
  if (x.size() != n || e.size() != n) throw std::invalid_argument("closedloop_jacobian: dimension mismatch");
  const Nonlinearity& nl = params.nonlinearity;
  std::vector<double> y(n), field(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = nl.g(x[i]);
  instance.multiply(y, field);

  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    jac(i, i) = nl.df(x[ui]);
    for (const Neighbor& nb : instance.neighbors(ui)) {
      jac(i, static_cast<Eigen::Index>(nb.index)) += params.beta * e[ui] * nb.weight * nl.dg(x[nb.index]);
    }
    jac(i, N + i) = params.beta * field[ui];
    jac(N + i, i) = -2.0 * params.xi * y[ui] * nl.dg(x[ui]) * e[ui];
    jac(N + i, N + i) = -params.xi * (y[ui] * y[ui] - a);
  }
  return jac;
}

Eigen::MatrixXd closedloop_jacobian_fd(const IsingInstance& instance, const ClosedLoopParams& params,
                                       std::span<const double> x, std::span<const double> e, double a, double h) {
  const std::size_t n = instance.size();
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jac(2 * N, 2 * N);
  std::vector<double> xp(x.begin(), x.end()), ep(e.begin(), e.end());
  std::vector<double> dxp(n), dep(n), dxm(n), dem(n);
  for (std::size_t c = 0; c < 2 * n; ++c) {
    double& coord = c < n ? xp[c] : ep[c - n];
    const double saved = coord;
    const double step = h * std::max(1.0, std::abs(saved));
    coord = saved + step;
    closedloop_field(instance, params, xp, ep, a, dxp, dep);
    coord = saved - step;
    closedloop_field(instance, params, xp, ep, a, dxm, dem);
    coord = saved;
    for (std::size_t r = 0; r < n; ++r) {
      jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (dxp[r] - dxm[r]) / (2.0 * step);
      jac(static_cast<Eigen::Index>(n + r), static_cast<Eigen::Index>(c)) = (dep[r] - dem[r]) / (2.0 * step);
    }
  }
  return jac;
}

StabilityEntry unstable_dimension(const IsingInstance& instance, std::span<const Spin> spins,
                                  const ClosedLoopParams& params) {
  const FixedPoint fp = construct_fixed_point(instance, spins, params);
  const Eigen::MatrixXd jac = closedloop_jacobian(instance, params, fp.x, fp.e, params.target);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jac, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Jacobian eigen-decomposition failed");
  const double tol = 1e-9 * std::max(1.0, jac.cwiseAbs().maxCoeff());

  StabilityEntry out{params.target, 0, {}};
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const std::complex<double> ev = solver.eigenvalues()[k];
    out.eigenvalues.push_back(ev);
    if (ev.real() > tol) ++out.n_unstable;
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const auto& l, const auto& r) { return l.real() > r.real(); });
  return out;
}

std::vector<double> mu_spectrum(const IsingInstance& instance, std::span<const Spin> spins) {
  const std::vector<double> h = abs_fields(instance, spins);
  const auto N = static_cast<Eigen::Index>(instance.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    for (const Neighbor& nb : instance.neighbors(i)) {
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nb.index)) =
          nb.weight / std::sqrt(h[i] * h[nb.index]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  std::vector<double> mu(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return mu;
}

std::vector<std::complex<double>> mu_spectrum_general(const IsingInstance& instance, std::span<const Spin> spins) {
  const std::vector<double> h = abs_fields(instance, spins);
  const auto N = static_cast<Eigen::Index>(instance.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    for (const Neighbor& nb : instance.neighbors(i)) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nb.index)) = nb.weight / h[i];
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  std::vector<std::complex<double>> out(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.real() > r.real(); });
  return out;
}

double instability_threshold(const Nonlinearity& nonlinearity, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("instability_threshold: a must be > 0");
  const double root_a = std::sqrt(a);
  if (nonlinearity.feedback == FeedbackKind::tanh && root_a >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double x = nonlinearity.g_inverse(root_a);
  const double fx = nonlinearity.f(x);
  if (!(fx < 0.0)) return std::numeric_limits<double>::infinity();
  return nonlinearity.df(x) * root_a / (nonlinearity.dg(x) * fx);
}

StabilityReport stability_report(const IsingInstance& instance, std::span<const Spin> spins,
                                 const ClosedLoopParams& params, std::span<const double> targets) {
  StabilityReport report{SpinConfig(instance, std::vector<Spin>(spins.begin(), spins.end())),
                         mu_spectrum(instance, spins), {}};
  for (double a : targets) {
    ClosedLoopParams p = params;
    p.target = a;
    report.n_unstable.emplace_back(a, unstable_dimension(instance, spins, p).n_unstable);
  }
  return report;
}

}  // namespace cimsolve
