#include "cimsolve/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace cimsolve {
namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void scale(std::vector<double>& v, double a) {
  for (double& x : v) x *= a;
}

// Two passes of classical Gram-Schmidt against the stored basis.
void orthogonalize(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      double c = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) c += q[i] * w[i];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
    }
  }
}

struct LanczosPass {
  double value;
  std::vector<double> vector;
  std::size_t products;
};

LanczosPass lanczos_pass(const IsingInstance& inst, std::vector<double> start, std::size_t max_basis, double tol,
                         std::mt19937_64& fresh) {
  const std::size_t n = inst.size();
  const std::size_t kmax = std::min(n, max_basis);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  basis.reserve(kmax);

  scale(start, 1.0 / norm2(start));
  basis.push_back(std::move(start));

  std::vector<double> w(n);
  Eigen::VectorXd ritz_coeffs;
  double theta = 0.0;
  std::size_t products = 0;

  for (std::size_t k = 0;; ++k) {
    inst.multiply(basis[k], w);
    ++products;
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += basis[k][i] * w[i];
    alpha.push_back(a);
    orthogonalize(w, basis);
    const double b = norm2(w);

    const std::size_t m = alpha.size();
    Eigen::VectorXd diag(m), sub(m > 1 ? m - 1 : 1);
    for (std::size_t i = 0; i < m; ++i) diag[i] = alpha[i];
    for (std::size_t i = 0; i + 1 < m; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub.head(m - 1), Eigen::ComputeEigenvectors);
    theta = tri.eigenvalues()[m - 1];
    ritz_coeffs = tri.eigenvectors().col(m - 1);
    const double ritz_residual = b * std::abs(ritz_coeffs[m - 1]);

    const bool breakdown = b <= 1e-12 * std::max(1.0, inst.max_row_sum());
    if (m == kmax || (!breakdown && ritz_residual <= tol)) break;

    if (breakdown) {
      // Invariant subspace reached; continue with a fresh direction so the
      // rest of the spectrum stays reachable. The coupling is zero here.
      std::normal_distribution<double> normal;
      for (double& x : w) x = normal(fresh);
      orthogonalize(w, basis);
      const double nw = norm2(w);
      if (nw <= 1e-12) break;
      scale(w, 1.0 / nw);
      beta.push_back(0.0);
    } else {
      scale(w, 1.0 / b);
      beta.push_back(b);
    }
    basis.push_back(w);
  }

  std::vector<double> y(n, 0.0);
  for (std::size_t k = 0; k < basis.size() && k < static_cast<std::size_t>(ritz_coeffs.size()); ++k) {
    for (std::size_t i = 0; i < n; ++i) y[i] += ritz_coeffs[static_cast<Eigen::Index>(k)] * basis[k][i];
  }
  scale(y, 1.0 / norm2(y));
  return {theta, std::move(y), products};
}

double residual_inf(const IsingInstance& inst, const std::vector<double>& v, double value) {
  std::vector<double> jv(v.size());
  inst.multiply(v, jv);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(jv[i] - value * v[i]));
  return r;
}

}  // namespace

EigenPair leading_eigenpair(const IsingInstance& instance, const LanczosOptions& options) {
  const std::size_t n = instance.size();
  const double scale_j = std::max(instance.max_row_sum(), 1e-300);
  const double tol = options.tolerance * scale_j;

  if (instance.edge_count() == 0) {
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    return {0.0, std::move(v), 0.0, 0};
  }

  // A random start avoids beginning inside a symmetric invariant subspace
  // (all-ones is an eigenvector of any regular graph).
  std::mt19937_64 fresh(0x5eed5eedULL);
  std::normal_distribution<double> normal;
  std::vector<double> start(n);
  for (double& x : start) x = normal(fresh);
  EigenPair out;
  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    LanczosPass pass = lanczos_pass(instance, start, options.max_basis, tol, fresh);
    out.iterations += pass.products;
    out.value = pass.value;
    out.vector = std::move(pass.vector);
    out.residual = residual_inf(instance, out.vector, out.value);
    if (out.residual <= tol) break;
    start = out.vector;
  }
  if (out.residual > tol) {
    throw ConvergenceError("Lanczos did not converge: residual " + std::to_string(out.residual) + " > " +
                               std::to_string(tol),
                           out.residual);
  }
  const auto lead = std::find_if(out.vector.begin(), out.vector.end(), [](double x) { return std::abs(x) > 1e-12; });
  if (lead != out.vector.end() && *lead < 0.0) scale(out.vector, -1.0);
  return out;
}

SpectralResult eigenvector_rounding(const IsingInstance& instance, const LanczosOptions& options) {
  if (instance.size() < 2) throw std::invalid_argument("eigenvector rounding needs n >= 2");
  EigenPair pair = leading_eigenpair(instance, options);
  SpinConfig rounded = round_spins(instance, pair.vector);
  return {pair.value, std::move(pair.vector), pair.residual, std::move(rounded)};
}

}  // namespace cimsolve
