#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cimsolve/bench.hpp"
#include "cimsolve/metrics.hpp"
#include "support.hpp"

using namespace cimsolve;

namespace {

BenchRecord record(const std::string& id, std::optional<std::size_t> hit, std::size_t budget = 100) {
  BenchRecord r;
  r.instance_id = id;
  r.ground_energy = -1.0;
  r.steps = budget;
  r.trace.push_back({1, 0.0});
  if (hit) r.trace.push_back({*hit, -1.0});
  return r;
}

}  // namespace

TEST_CASE("iterations to solution") {
  CHECK(restarts_to_solution(500, 0.99) == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(restarts_to_solution(100, 0.5) == doctest::Approx(664.3856189774724).epsilon(1e-12));
  CHECK(restarts_to_solution(100, 0.5) == doctest::Approx(100.0 * std::log(0.01) / std::log(0.5)).epsilon(1e-15));
  CHECK(restarts_to_solution(70, 1.0) == 70.0);
  CHECK(std::isinf(restarts_to_solution(70, 0.0)));
  CHECK(std::isinf(iterations_to_solution({{10, 20}, {0.0, 0.0}})));
  CHECK(iterations_to_solution({{10, 20, 40}, {0.1, 0.5, 0.99}}) == doctest::Approx(40.0));
}

TEST_CASE("restart formula on synthetic geometric records") {
  // A solver that succeeds per independent attempt of length L with
  // probability q has p0(kL) = 1 - (1 - q)^k and needs
  // L log(0.01) / log(1 - q) steps for 99 % success.
  const double q = 0.3;
  const std::size_t len = 50;
  for (std::size_t k = 1; k <= 8; ++k) {
    const double p0 = 1.0 - std::pow(1.0 - q, static_cast<double>(k));
    CHECK(restarts_to_solution(k * len, p0) == doctest::Approx(len * std::log(0.01) / std::log(1.0 - q)).epsilon(1e-12));
  }
}

TEST_CASE("nearest-rank percentiles") {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = static_cast<double>(100 - i);
  const double ps[] = {0.0, 1.0, 50.0, 80.0, 90.0, 100.0};
  CHECK(percentiles(v, ps) == std::vector<double>{1, 1, 50, 80, 90, 100});
  const double one[] = {7.5};
  const double three[] = {10.0, 50.0, 90.0};
  CHECK(percentiles(one, three) == std::vector<double>{7.5, 7.5, 7.5});
  const std::vector<double> ties{3, 1, 2, 2, 3, 1};
  std::vector<double> shuffled(ties);
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(percentiles(ties, three) == percentiles(shuffled, three));
  CHECK_THROWS_AS(percentiles(std::vector<double>{}, three), std::invalid_argument);
  const double bad[] = {1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(percentiles(bad, three), std::invalid_argument);
  const double out_of_range[] = {101.0};
  CHECK_THROWS_AS(percentiles(one, out_of_range), std::invalid_argument);
}

TEST_CASE("success probability averages per instance first") {
  const std::vector<BenchRecord> recs{record("a", 5),  record("a", 7),  record("a", 9), record("a", std::nullopt),
                                      record("b", 3),  record("b", std::nullopt), record("b", std::nullopt),
                                      record("b", std::nullopt)};
  const std::size_t grid[] = {2, 9, 100};
  const SuccessCurve c = success_probability(recs, grid);
  CHECK(c.p0 == std::vector<double>{0.0, 0.5, 0.5});

  const std::vector<BenchRecord> all{record("x", 1), record("y", 1)};
  CHECK(success_probability(all, grid).p0 == std::vector<double>{1.0, 1.0, 1.0});
  const std::vector<BenchRecord> none{record("x", std::nullopt)};
  CHECK(success_probability(none, grid).p0 == std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(success_probability(std::vector<BenchRecord>{}, grid), std::invalid_argument);

  const auto g = default_grid(recs);
  CHECK(g == std::vector<std::size_t>{3, 5, 7, 9, 100});
  const SuccessCurve full = success_probability(recs, g);
  for (std::size_t k = 1; k < full.p0.size(); ++k) CHECK(full.p0[k] >= full.p0[k - 1]);
}

TEST_CASE("success tolerance") {
  BenchRecord r = record("a", std::nullopt);
  r.ground_energy = -100.0;
  r.trace.push_back({4, -100.0 + 1e-8});
  CHECK(r.hit_step() == 4);
  r.trace.back().energy = -99.999;
  CHECK_FALSE(r.hit_step().has_value());
}

TEST_CASE("n_s summary separates unattained instances") {
  const std::vector<BenchRecord> recs{record("a", 10), record("a", 10), record("b", std::nullopt)};
  const NsSummary s = summarize_ns(recs);
  CHECK(s.per_instance.at("a") == 10.0);
  CHECK(std::isinf(s.per_instance.at("b")));
  CHECK(s.attainment == 0.5);
  CHECK(s.percentile_values == std::vector<double>{10.0, 10.0, 10.0});
}

TEST_CASE("grid runs") {
  SolverConfig cfg;
  cfg.steps = 2000;
  const std::vector<BenchInstance> one{{"pair", testing::ferro_pair(), std::nullopt}};
  const auto a = run_grid(one, cfg, 10, 5);
  REQUIRE(a.size() == 10);
  for (const BenchRecord& r : a) {
    CHECK(r.hit_step().has_value());
    CHECK(r.best_energy() == -1.0);
  }
  const auto b = run_grid(one, cfg, 10, 5, {3, true});
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(a[k].seed == b[k].seed);
    CHECK(a[k].trace.size() == b[k].trace.size());
    CHECK(a[k].best_energy() == b[k].best_energy());
  }
}

TEST_CASE("grid results do not depend on instance order or worker count") {
  SolverConfig cfg;
  cfg.steps = 500;
  std::vector<BenchInstance> insts;
  for (int k = 0; k < 4; ++k) insts.push_back({"sk" + std::to_string(k), generate_sk(10, k), std::nullopt});
  const auto a = run_grid(insts, cfg, 3, 17, {1, true});
  std::reverse(insts.begin(), insts.end());
  const auto b = run_grid(insts, cfg, 3, 17, {4, true});
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].instance_id == b[k].instance_id);
    CHECK(a[k].seed == b[k].seed);
    REQUIRE(a[k].trace.size() == b[k].trace.size());
    for (std::size_t t = 0; t < a[k].trace.size(); ++t) {
      CHECK(a[k].trace[t].step == b[k].trace[t].step);
      CHECK(a[k].trace[t].energy == b[k].trace[t].energy);
    }
  }
}

TEST_CASE("grid input validation") {
  SolverConfig cfg;
  const std::vector<BenchInstance> dup{{"x", testing::ferro_pair(), std::nullopt}, {"x", testing::path(3), std::nullopt}};
  CHECK_THROWS_AS(run_grid(dup, cfg, 1, 0), std::invalid_argument);
  const std::vector<BenchInstance> big{{"ring", generate_ring(30, -1), std::nullopt}};
  CHECK_THROWS_WITH_AS(run_grid(big, cfg, 1, 0), doctest::Contains("no target"), std::invalid_argument);
  const std::vector<BenchInstance> ok{{"ring", generate_ring(30, -1), -30.0}};
  cfg.steps = 10;
  CHECK(run_grid(ok, cfg, 1, 0).size() == 1);
  CHECK_THROWS_AS(run_grid(ok, cfg, 0, 0), std::invalid_argument);
}

TEST_CASE("every solver kind runs in the grid") {
  const std::vector<BenchInstance> one{{"sk", generate_sk(8, 2), std::nullopt}};
  for (SolverKind k : {SolverKind::open_loop, SolverKind::closed_loop, SolverKind::bp, SolverKind::tap,
                       SolverKind::eigvec}) {
    SolverConfig cfg;
    cfg.kind = k;
    cfg.schedule = Schedule::standard(5.0);
    cfg.steps = 200;
    const auto recs = run_grid(one, cfg, 2, 1);
    CHECK(recs.size() == 2);
    CHECK(recs[0].solver_id == solver_name(k));
    CHECK(recs[0].best_energy() >= recs[0].ground_energy - 1e-12);
    CHECK(parse_solver(solver_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_solver("sa"), std::invalid_argument);
}
