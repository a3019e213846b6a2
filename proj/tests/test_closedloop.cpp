#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>

#include "cimsolve/closedloop.hpp"
#include "cimsolve/oracle.hpp"
#include "cimsolve/stability.hpp"
#include "support.hpp"

using namespace cimsolve;

namespace {

// Every strict local minimum with spin 0 = +1.
std::vector<std::vector<Spin>> strict_minima(const IsingInstance& inst) {
  std::vector<std::vector<Spin>> out;
  const std::size_t n = inst.size();
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    const auto s = testing::spins_of(b, n);
    if (s[0] != 1) continue;
    const auto h = local_fields(inst, s);
    bool strict = true;
    for (std::size_t i = 0; i < n; ++i) strict = strict && s[i] * h[i] > 0.0;
    if (strict) out.push_back(s);
  }
  return out;
}

ClosedLoopParams tanh_params(double pump) {
  ClosedLoopParams p;
  p.nonlinearity = {GainKind::tanh_saturation, FeedbackKind::identity, pump};
  p.beta = 0.5;
  p.xi = 0.5;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  ClosedLoopParams p;
  CHECK_NOTHROW(p.validate());
  p.xi = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.target = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.modulation = Modulation::divergence_positive;
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("ferromagnetic pair settles with homogeneous amplitudes") {
  ClosedLoopParams p;
  p.target = 1.0;
  ClosedLoopOptions o;
  o.settle_tolerance = 1e-11;
  const ClosedLoopResult r = integrate_closedloop(testing::ferro_pair(), p, 200000, 3, o);
  CHECK(r.status == RunStatus::settled);
  CHECK(r.trace.best_energy() == -1.0);
  for (double x : r.state.x) CHECK(x * x == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.state.x[0] == doctest::Approx(r.state.x[1]));
}

TEST_CASE("error variables stay positive even with a coarse step") {
  ClosedLoopParams p;
  p.dt = 0.5;
  p.xi = 3.0;
  p.target = 0.5;
  double min_e = 1.0;
  ClosedLoopOptions o;
  o.sink = [&](const TrajectoryRow& row) { min_e = std::min(min_e, row.min_e); };
  const ClosedLoopResult r = integrate_closedloop(generate_sk(10, 1), p, 500, 2, o);
  if (r.status != RunStatus::diverged) {
    for (double e : r.state.e()) CHECK(e > 0.0);
  }
  CHECK(min_e > 0.0);
}

TEST_CASE("closed-loop runs are deterministic") {
  const IsingInstance sk = generate_sk(12, 4);
  const ClosedLoopResult a = integrate_closedloop(sk, {}, 3000, 9), b = integrate_closedloop(sk, {}, 3000, 9);
  CHECK(a.state.x == b.state.x);
  CHECK(a.state.log_e == b.state.log_e);
  CHECK(a.trace.best_step() == b.trace.best_step());
}

TEST_CASE("best energy never undercuts the ground energy") {
  const IsingInstance sk = generate_sk(14, 5);
  const double ground = exhaustive_ground_states(sk).ground_energy;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ClosedLoopResult r = integrate_closedloop(sk, {}, 5000, seed);
    const auto& pts = r.trace.points();
    for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k].energy < pts[k - 1].energy);
    CHECK(r.trace.best_energy() >= ground - 1e-12);
  }
}

TEST_CASE("target update rule") {
  ClosedLoopParams p;
  p.nonlinearity.pump = 0.0;
  p.xi = 1.0;
  p.target = 1.0;
  p.epsilon = 0.1;
  p.modulation = Modulation::divergence_positive;
  const std::vector<double> zero(4, 0.0);
  // f'(0) = -1 per spin, so at a = 1 the divergence is exactly 0 < epsilon
  // and the rule lifts a just enough: (0 + 4 + 0.1) / 4.
  CHECK(divergence_xe(p, zero, 1.0) == doctest::Approx(0.0));
  CHECK(update_target(p, zero) == doctest::Approx(1.025));
  CHECK(divergence_xe(p, zero, update_target(p, zero)) == doctest::Approx(0.1));

  p.epsilon = 1e-3;
  p.target = 2.0;
  CHECK(update_target(p, zero) == 2.0);  // base target already has margin

  const std::vector<double> big{3.0, -2.0, 1.0, 0.5};
  double g2 = 0.0, fp = 0.0;
  for (double x : big) {
    g2 += x * x;
    fp += p.nonlinearity.df(x);
  }
  CHECK(update_target(p, big) == doctest::Approx((g2 - fp + 1e-3) / 4.0));
  CHECK(update_target(p, big) > p.target);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(7);
    for (double& v : x) v = 2.0 * d(rng);
    CHECK(divergence_xe(p, x, update_target(p, x)) >= p.epsilon - 1e-12);
  }
  CHECK(divergence_log(p, zero) == -4.0);
}

TEST_CASE("modulated runs keep the divergence above epsilon") {
  ClosedLoopParams p;
  p.modulation = Modulation::divergence_positive;
  p.epsilon = 0.05;
  double min_div = 1e300;
  ClosedLoopOptions o;
  o.sink = [&](const TrajectoryRow& row) { min_div = std::min(min_div, row.divergence); };
  const ClosedLoopResult r = integrate_closedloop(generate_sk(12, 2), p, 3000, 1, o);
  CHECK(min_div >= p.epsilon - 1e-9);
  CHECK(r.min_divergence >= p.epsilon - 1e-9);
  // Keeping phase-space volume expanding leaves no bounded attractor: the
  // run ends at the overflow guard.
  CHECK(r.status == RunStatus::diverged);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("fixed point construction") {
  ClosedLoopParams p;
  p.nonlinearity = {GainKind::cubic, FeedbackKind::identity, 1.0};
  p.target = 1.0;
  p.beta = 1.0;
  const std::vector<Spin> up{1, 1}, down{-1, -1};
  const FixedPoint fp = construct_fixed_point(testing::ferro_pair(), up, p);
  CHECK(fp.x == std::vector<double>{1.0, 1.0});
  CHECK(fp.e == std::vector<double>{1.0, 1.0});
  const FixedPoint fq = construct_fixed_point(testing::ferro_pair(), down, p);
  CHECK(fq.x == std::vector<double>{-1.0, -1.0});

  const std::vector<Spin> tri{1, 1, -1};
  try {
    construct_fixed_point(testing::triangle(), tri, p);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("not a strict local minimum") != std::string::npos);
    CHECK(std::string(e.what()).find("spin 0") != std::string::npos);
  }

  // Cubic with p - 1 > a: f(x) > 0 at x = sqrt(a), so e would be negative.
  p.nonlinearity.pump = 3.0;
  CHECK_THROWS_WITH_AS(construct_fixed_point(testing::ferro_pair(), up, p), doctest::Contains("spin 0"),
                       std::invalid_argument);
}

TEST_CASE("stable fixed points hold still under the integrator") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IsingInstance sk = generate_sk(10, seed);
    ClosedLoopParams p;
    p.target = 2.0;
    for (const auto& s : strict_minima(sk)) {
      if (unstable_dimension(sk, s, p).n_unstable != 0) continue;
      const FixedPoint fp = construct_fixed_point(sk, s, p);
      ClosedLoopOptions o;
      o.initial_x = fp.x;
      o.initial_e = fp.e;
      const ClosedLoopResult r = integrate_closedloop(sk, p, 1000, 0, o);
      const auto e = r.state.e();
      for (std::size_t i = 0; i < 10; ++i) {
        CHECK(std::abs(r.state.x[i] - fp.x[i]) < 1e-8);
        CHECK(std::abs(e[i] - fp.e[i]) < 1e-8 * std::max(1.0, fp.e[i]));
      }
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("analytic Jacobian matches finite differences") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const IsingInstance sk = generate_sk(4 + seed % 9, seed + 50);
    const auto minima = strict_minima(sk);
    REQUIRE_FALSE(minima.empty());
    const auto& s = minima[seed % minima.size()];
    ClosedLoopParams p = seed % 2 ? tanh_params(1.2) : ClosedLoopParams{};
    p.target = seed % 2 ? 1.0 : 0.2;
    const FixedPoint fp = construct_fixed_point(sk, s, p);
    const Eigen::MatrixXd a = closedloop_jacobian(sk, p, fp.x, fp.e, p.target);
    const Eigen::MatrixXd f = closedloop_jacobian_fd(sk, p, fp.x, fp.e, p.target);
    CHECK((a - f).cwiseAbs().maxCoeff() < 1e-5 * std::max(1.0, a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("mu spectrum") {
  const std::vector<Spin> up{1, 1}, down{-1, -1};
  const auto mu = mu_spectrum(testing::ferro_pair(), up);
  CHECK(mu[0] == doctest::Approx(1.0));
  CHECK(mu[1] == doctest::Approx(-1.0));
  CHECK(mu_spectrum(testing::ferro_pair(), down) == mu);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IsingInstance sk = generate_sk(9, seed);
    for (const auto& s : strict_minima(sk)) {
      const auto sym = mu_spectrum(sk, s);
      const auto gen = mu_spectrum_general(sk, s);
      REQUIRE(sym.size() == gen.size());
      for (std::size_t k = 0; k < sym.size(); ++k) {
        CHECK(std::abs(gen[k].imag()) < 1e-9);
        CHECK(gen[k].real() == doctest::Approx(sym[k]).epsilon(1e-9));
      }
      // The configuration itself is an eigenvector with eigenvalue 1.
      CHECK(std::any_of(sym.begin(), sym.end(), [](double m) { return std::abs(m - 1.0) < 1e-9; }));
    }
  }
  const std::vector<Spin> tri{1, 1, -1};
  CHECK_THROWS_AS(mu_spectrum(testing::triangle(), tri), std::invalid_argument);
}

TEST_CASE("unstable dimension equals twice the number of mu above F(a)") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IsingInstance sk = generate_sk(10, seed + 7);
    for (const auto& s : strict_minima(sk)) {
      const auto mu = mu_spectrum(sk, s);
      for (const ClosedLoopParams& base : {ClosedLoopParams{}, tanh_params(1.2)}) {
        for (double a : {0.05, 0.3, 0.8, 2.0}) {
          ClosedLoopParams p = base;
          p.target = a;
          const double f = instability_threshold(p.nonlinearity, a);
          if (!std::isfinite(f)) continue;
          std::size_t above = 0;
          bool marginal = false;
          for (double m : mu) {
            above += m > f;
            marginal = marginal || std::abs(m - f) < 1e-6;
          }
          if (marginal) continue;
          CHECK(unstable_dimension(sk, s, p).n_unstable == 2 * above);
        }
      }
    }
  }
}

TEST_CASE("ferromagnetic pair is never destabilized") {
  // mu = {1, -1} and F(a) > 1 for both gains, so N_u stays at 0 for every a.
  const std::vector<Spin> up{1, 1};
  const std::vector<double> targets{0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0};
  for (const ClosedLoopParams& base : {ClosedLoopParams{}, tanh_params(0.5)}) {
    const StabilityReport rep = stability_report(testing::ferro_pair(), up, base, targets);
    for (const auto& [a, nu] : rep.n_unstable) CHECK(nu == 0);
  }
}

TEST_CASE("raising the target destabilizes excited minima") {
  const IsingInstance sk = generate_sk(12, 31);
  const ClosedLoopParams p = tanh_params(1.2);
  std::vector<double> targets;
  for (double a = 1.0; a <= 6.0; a += 0.25) targets.push_back(a);
  bool some_unstable = false;
  for (const auto& s : strict_minima(sk)) {
    const StabilityReport rep = stability_report(sk, s, p, targets);
    for (std::size_t k = 1; k < rep.n_unstable.size(); ++k) {
      CHECK(rep.n_unstable[k].second >= rep.n_unstable[k - 1].second);
    }
    some_unstable = some_unstable || rep.n_unstable.back().second > 0;
  }
  CHECK(some_unstable);
}

TEST_CASE("trajectories leave unstable fixed points") {
  const IsingInstance sk = generate_sk(12, 31);
  ClosedLoopParams p = tanh_params(1.2);
  p.target = 4.0;
  int tested = 0;
  for (const auto& s : strict_minima(sk)) {
    if (unstable_dimension(sk, s, p).n_unstable == 0) continue;
    const FixedPoint fp = construct_fixed_point(sk, s, p);
    std::vector<double> x0(fp.x);
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += 1e-6 * ((i % 3) - 1.0);
    std::size_t inside = 0, longest = 0;
    // Same Euler scheme as the integrator, written out to watch the distance.
    ClosedLoopState st{x0, {}, p.target, 0.0};
    for (double e : fp.e) st.log_e.push_back(std::log(e));
    std::vector<double> dx(x0.size()), de(x0.size());
    for (int k = 0; k < 3000; ++k) {
      const auto e = st.e();
      closedloop_field(sk, p, st.x, e, p.target, dx, de);
      for (std::size_t i = 0; i < x0.size(); ++i) {
        st.x[i] += p.dt * dx[i];
        st.log_e[i] += p.dt * de[i] / e[i];
      }
      double dist = 0.0;
      for (std::size_t i = 0; i < x0.size(); ++i) dist = std::max(dist, std::abs(st.x[i] - fp.x[i]));
      inside = dist < 1e-3 ? inside + 1 : 0;
      longest = std::max(longest, inside);
    }
    CHECK(longest <= 1000);
    if (++tested == 5) break;
  }
  CHECK(tested > 0);
}

TEST_CASE("instability threshold") {
  const Nonlinearity cubic{GainKind::cubic, FeedbackKind::identity, 0.0};
  // Cubic, identity: F = (p - 1 - 3a) / (p - 1 - a).
  CHECK(instability_threshold(cubic, 0.5) == doctest::Approx((-1.0 - 1.5) / (-1.0 - 0.5)));
  CHECK(std::isinf(instability_threshold(cubic.with_pump(3.0), 1.0)));
  CHECK_THROWS_AS(instability_threshold(cubic, 0.0), std::invalid_argument);
  const Nonlinearity tanh_fb{GainKind::cubic, FeedbackKind::tanh, 0.0};
  CHECK(std::isinf(instability_threshold(tanh_fb, 1.5)));
}
