#include <doctest.h>

#include <stdexcept>

#include <random>

#include "cimsolve/ising.hpp"
#include "cimsolve/maxcut.hpp"
#include "cimsolve/spectral.hpp"
#include "support.hpp"

using namespace cimsolve;
using testing::spins_of;

TEST_CASE("energy of small instances") {
  const std::vector<Spin> up{1, 1};
  CHECK(energy(testing::ferro_pair(), up) == -1.0);
  const std::vector<Spin> s{1, 1, -1};
  CHECK(energy(testing::triangle(), s) == -1.0);
  const IsingInstance sk = generate_sk(9, 4);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto cfg = spins_of(rng(), 9);
    std::vector<Spin> neg(cfg);
    for (Spin& v : neg) v = static_cast<Spin>(-v);
    CHECK(energy(sk, cfg) == doctest::Approx(energy(sk, neg)).epsilon(1e-14));
    CHECK(energy(sk, cfg) == doctest::Approx(testing::naive_energy(sk, cfg)).epsilon(1e-12));
  }
}

TEST_CASE("energy rejects malformed spin vectors") {
  const std::vector<Spin> short_vec{1};
  const std::vector<Spin> zero{1, 0};
  CHECK_THROWS_AS(energy(testing::ferro_pair(), short_vec), std::invalid_argument);
  CHECK_THROWS_AS(energy(testing::ferro_pair(), zero), std::invalid_argument);
  CHECK_THROWS_AS(SpinConfig(testing::ferro_pair(), {1, 2}), std::invalid_argument);
}

TEST_CASE("local fields") {
  const std::vector<Spin> up{1, 1};
  CHECK(local_fields(testing::ferro_pair(), up) == std::vector<double>{1.0, 1.0});
  const std::vector<Spin> s{1, 1, -1};
  CHECK(local_fields(testing::triangle(), s) == std::vector<double>{0.0, 0.0, -2.0});
  const IsingInstance empty(3, std::span<const Coupling>{});
  CHECK(local_fields(empty, s) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("flip identity holds exhaustively on a 10-spin SK instance") {
  const IsingInstance sk = generate_sk(10, 21);
  for (std::uint64_t b = 0; b < 1024; ++b) {
    auto s = spins_of(b, 10);
    const double e = energy(sk, s);
    const auto h = local_fields(sk, s);
    for (std::size_t i = 0; i < 10; ++i) {
      s[i] = static_cast<Spin>(-s[i]);
      CHECK(energy(sk, s) - e == doctest::Approx(2.0 * (-s[i]) * h[i]).epsilon(1e-12).scale(1.0));
      s[i] = static_cast<Spin>(-s[i]);
    }
  }
}

TEST_CASE("local minimum test agrees with explicit flip enumeration") {
  const std::vector<Spin> up{1, 1}, mixed{1, -1}, tri{1, 1, -1};
  CHECK(is_local_minimum(testing::ferro_pair(), up));
  CHECK_FALSE(is_local_minimum(testing::ferro_pair(), mixed));
  CHECK(is_local_minimum(testing::triangle(), tri));

  const IsingInstance sk = generate_sk(8, 2);
  for (std::uint64_t b = 0; b < 256; ++b) {
    auto s = spins_of(b, 8);
    const double e = energy(sk, s);
    bool improving = false;
    for (std::size_t i = 0; i < 8; ++i) {
      s[i] = static_cast<Spin>(-s[i]);
      improving = improving || energy(sk, s) < e - 1e-12;
      s[i] = static_cast<Spin>(-s[i]);
    }
    CHECK(is_local_minimum(sk, s) == !improving);
  }
}

TEST_CASE("construction validates couplings") {
  const Coupling diag[] = {{1, 1, 1.0}};
  const Coupling out_of_range[] = {{0, 3, 1.0}};
  const Coupling dup[] = {{0, 1, 1.0}, {1, 0, 2.0}};
  const Coupling nan[] = {{0, 1, std::nan("")}};
  CHECK_THROWS_AS(IsingInstance(3, diag), std::invalid_argument);
  CHECK_THROWS_AS(IsingInstance(3, out_of_range), std::invalid_argument);
  CHECK_THROWS_AS(IsingInstance(3, dup), std::invalid_argument);
  CHECK_THROWS_AS(IsingInstance(3, nan), std::invalid_argument);
  const Coupling zero[] = {{0, 1, 0.0}, {1, 2, 1.0}};
  CHECK(IsingInstance(3, zero).edge_count() == 1);

  const double asym[] = {0, 1, 2, 0};
  const double diag_m[] = {1, 1, 1, 0};
  const double ok[] = {0, 1.5, 1.5, 0};
  CHECK_THROWS_AS(IsingInstance::from_matrix(2, asym), std::invalid_argument);
  CHECK_THROWS_AS(IsingInstance::from_matrix(2, diag_m), std::invalid_argument);
  CHECK(IsingInstance::from_matrix(2, ok).coupling(1, 0) == 1.5);
}

TEST_CASE("dense and sparse storage behave identically") {
  const IsingInstance sk = generate_sk(30, 8);
  const auto edges = sk.edges();
  const IsingInstance sparse(30, edges, "s", Storage::sparse);
  const IsingInstance dense(30, edges, "d", Storage::dense);
  CHECK_FALSE(sparse.is_dense());
  CHECK(dense.is_dense());
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d;
  std::vector<double> x(30), y0(30), y1(30);
  for (double& v : x) v = d(rng);
  sparse.multiply(x, y0);
  dense.multiply(x, y1);
  for (std::size_t i = 0; i < 30; ++i) CHECK(y0[i] == doctest::Approx(y1[i]).epsilon(1e-13));
  CHECK(sparse.to_dense() == dense.to_dense());
  const auto s = spins_of(rng(), 30);
  CHECK(energy(sparse, s) == doctest::Approx(energy(dense, s)).epsilon(1e-13));
}

TEST_CASE("SK generator") {
  const IsingInstance a = generate_sk(12, 77), b = generate_sk(12, 77);
  CHECK(a.to_dense() == b.to_dense());
  CHECK(a.to_dense() != generate_sk(12, 78).to_dense());
  CHECK_THROWS_AS(generate_sk(1, 0), std::invalid_argument);

  const std::size_t n = 1000;
  const IsingInstance big = generate_sk(n, 3);
  double sum = 0.0, sq = 0.0;
  std::size_t count = 0;
  for (const Coupling& c : big.edges()) {
    sum += c.value;
    sq += c.value * c.value;
    ++count;
  }
  CHECK(count == n * (n - 1) / 2);
  const double mean = sum / static_cast<double>(count);
  const double var = sq / static_cast<double>(count) - mean * mean;
  CHECK(std::abs(mean) < 0.1 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0 / n).epsilon(0.1));
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 50; ++j) CHECK(big.coupling(i, j) == big.coupling(j, i));
  CHECK(big.coupling(4, 4) == 0.0);
}

TEST_CASE("ring generator") {
  const IsingInstance af = generate_ring(16, -1);
  std::vector<Spin> alt(16);
  for (std::size_t i = 0; i < 16; ++i) alt[i] = i % 2 ? Spin{-1} : Spin{1};
  CHECK(energy(af, alt) == -16.0);
  CHECK(af.edge_count() == 16);
  CHECK(af.coupling(0, 15) == -1.0);
  const IsingInstance fm = generate_ring(4, 1);
  CHECK(energy(fm, std::vector<Spin>(4, 1)) == -4.0);
  CHECK_THROWS_AS(generate_ring(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_ring(5, 0), std::invalid_argument);
}

TEST_CASE("rounding") {
  const std::vector<double> a{0.3, -2.1}, b{0.0, -0.5};
  CHECK(round_spins(a) == std::vector<Spin>{1, -1});
  CHECK(round_spins(b) == std::vector<Spin>{1, -1});
  std::vector<double> scaled{0.3 * 7.5, -2.1 * 7.5};
  CHECK(round_spins(scaled) == round_spins(a));
}

TEST_CASE("spin configs cache their energy") {
  const IsingInstance sk = generate_sk(11, 13);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const SpinConfig c(sk, spins_of(rng(), 11));
    CHECK(std::abs(c.energy() - energy(sk, c.spins())) < 1e-12);
    CHECK(c.flipped().energy() == c.energy());
  }
}

TEST_CASE("negation flips the convention") {
  const IsingInstance sk = generate_sk(6, 1);
  const auto s = spins_of(0b101101, 6);
  CHECK(energy(sk.negated(), s) == doctest::Approx(-energy(sk, s)));
}
