#include <doctest.h>

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <set>

#include "cimsolve/spectral.hpp"
#include "support.hpp"

using namespace cimsolve;

namespace {

double dense_lambda_max(const IsingInstance& inst) {
  const std::size_t n = inst.size();
  const auto d = inst.to_dense();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d[i * n + j];
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("ferromagnetic pair rounds to its ground state") {
  const SpectralResult r = eigenvector_rounding(testing::ferro_pair());
  CHECK(r.eigenvalue == doctest::Approx(1.0));
  CHECK(std::abs(r.eigenvector[0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(r.eigenvector[0] == doctest::Approx(r.eigenvector[1]));
  CHECK(r.rounded.energy() == -1.0);
}

TEST_CASE("Lanczos matches a dense eigensolver") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const IsingInstance sk = generate_sk(5 + seed * 4, seed);
    const EigenPair p = leading_eigenpair(sk);
    CHECK(p.value == doctest::Approx(dense_lambda_max(sk)).epsilon(1e-10));
    CHECK(p.residual < 1e-8 * sk.frobenius_norm());
  }
}

TEST_CASE("symmetric starts do not trap the solver") {
  // All-ones is an eigenvector of both rings with eigenvalue -2 / +2.
  CHECK(leading_eigenpair(generate_ring(16, -1)).value == doctest::Approx(2.0));
  CHECK(leading_eigenpair(generate_ring(15, -1)).value == doctest::Approx(2.0 * std::cos(M_PI / 15.0)));
  CHECK(leading_eigenpair(generate_ring(16, 1)).value == doctest::Approx(2.0));
  // Complete antiferromagnet: spectrum {-(n-1), +1 (n-1 times)}.
  std::vector<Coupling> c;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) c.push_back({i, j, -1.0});
  CHECK(leading_eigenpair(IsingInstance(8, c)).value == doctest::Approx(1.0));
}

TEST_CASE("large sparse instance") {
  // Sparse unit-weight random graph: the Perron value lies between the mean
  // and the maximum degree and is well separated from the bulk.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, 1999);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Coupling> c;
  while (c.size() < 6000) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (seen.insert({i, j}).second) c.push_back({i, j, 1.0});
  }
  const IsingInstance g(2000, c);
  CHECK_FALSE(g.is_dense());
  std::size_t max_degree = 0;
  for (std::size_t i = 0; i < 2000; ++i) max_degree = std::max(max_degree, g.degree(i));
  const EigenPair p = leading_eigenpair(g);
  CHECK(p.value >= 6.0);
  CHECK(p.value <= static_cast<double>(max_degree));
  CHECK(p.residual < 1e-8 * g.max_row_sum());
  for (double v : p.vector) CHECK(v >= -1e-8);
}

TEST_CASE("opposite eigenvectors give flipped roundings of equal energy") {
  const IsingInstance sk = generate_sk(12, 3);
  const SpectralResult r = eigenvector_rounding(sk);
  std::vector<double> neg(r.eigenvector);
  for (double& v : neg) v = -v;
  const SpinConfig flipped = round_spins(sk, neg);
  // Only a zero component could break the exact flip; none is expected here.
  CHECK(flipped == r.rounded.flipped());
  CHECK(flipped.energy() == r.rounded.energy());
}

TEST_CASE("eigenvector rounding needs two spins") {
  const IsingInstance one(1, std::span<const Coupling>{});
  CHECK_THROWS_AS(eigenvector_rounding(one), std::invalid_argument);
  const IsingInstance none(3, std::span<const Coupling>{});
  CHECK(leading_eigenpair(none).value == 0.0);
}
