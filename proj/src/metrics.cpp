#include "cimsolve/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cimsolve {

double success_threshold(double target, double rel_tol) {
  return target + rel_tol * std::max(1.0, std::abs(target));
}

std::optional<std::size_t> BenchRecord::hit_step(double rel_tol) const {
  const double threshold = success_threshold(ground_energy, rel_tol);
  for (const TracePoint& p : trace) {
    if (p.energy <= threshold) return p.step;
  }
  return std::nullopt;
}

double BenchRecord::best_energy() const {
  return trace.empty() ? std::numeric_limits<double>::infinity() : trace.back().energy;
}

SuccessCurve success_probability(std::span<const BenchRecord> records, std::span<const std::size_t> n_grid,
                                 double rel_tol) {
  if (records.empty()) throw std::invalid_argument("success_probability: no records");
  if (n_grid.empty()) throw std::invalid_argument("success_probability: empty grid");

  // Per-instance list of hit steps (npos for misses).
  std::map<std::string, std::vector<std::size_t>> hits;
  for (const BenchRecord& r : records) {
    hits[r.instance_id].push_back(r.hit_step(rel_tol).value_or(static_cast<std::size_t>(-1)));
  }
  SuccessCurve out{std::vector<std::size_t>(n_grid.begin(), n_grid.end()), {}};
  std::sort(out.n_grid.begin(), out.n_grid.end());
  for (std::size_t n : out.n_grid) {
    double sum = 0.0;
    for (const auto& [id, steps] : hits) {
      const auto ok = std::count_if(steps.begin(), steps.end(), [n](std::size_t s) { return s <= n; });
      sum += static_cast<double>(ok) / static_cast<double>(steps.size());
    }
    out.p0.push_back(sum / static_cast<double>(hits.size()));
  }
  return out;
}

std::vector<std::size_t> default_grid(std::span<const BenchRecord> records, double rel_tol) {
  std::vector<std::size_t> grid;
  std::size_t budget = 1;
  for (const BenchRecord& r : records) {
    if (auto s = r.hit_step(rel_tol)) grid.push_back(*s);
    budget = std::max(budget, r.steps);
  }
  grid.push_back(budget);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double restarts_to_solution(std::size_t n, double p0) {
  if (p0 >= 1.0) return static_cast<double>(n);
  if (p0 <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n) * std::log(0.01) / std::log1p(-p0);
}

double iterations_to_solution(const SuccessCurve& curve) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < curve.n_grid.size(); ++k) {
    best = std::min(best, restarts_to_solution(curve.n_grid[k], curve.p0[k]));
  }
  return best;
}

std::vector<double> percentiles(std::span<const double> values, std::span<const double> ps) {
  if (values.empty()) throw std::invalid_argument("percentiles: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  if (std::any_of(sorted.begin(), sorted.end(), [](double v) { return !std::isfinite(v); })) {
    throw std::invalid_argument("percentiles: non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  std::vector<double> out;
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentiles: p must lie in [0, 100]");
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * count));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    out.push_back(sorted[rank - 1]);
  }
  return out;
}

NsSummary summarize_ns(std::span<const BenchRecord> records, std::span<const double> ps, double rel_tol) {
  if (records.empty()) throw std::invalid_argument("summarize_ns: no records");
  std::map<std::string, std::vector<BenchRecord>> by_instance;
  for (const BenchRecord& r : records) by_instance[r.instance_id].push_back(r);

  NsSummary out;
  out.ps.assign(ps.begin(), ps.end());
  std::vector<double> finite;
  for (const auto& [id, recs] : by_instance) {
    const std::vector<std::size_t> grid = default_grid(recs, rel_tol);
    const double ns = iterations_to_solution(success_probability(recs, grid, rel_tol));
    out.per_instance[id] = ns;
    if (std::isfinite(ns)) finite.push_back(ns);
  }
  out.attainment = static_cast<double>(finite.size()) / static_cast<double>(by_instance.size());
  if (!finite.empty()) out.percentile_values = percentiles(finite, ps);
  return out;
}

}  // namespace cimsolve
