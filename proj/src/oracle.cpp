#include "cimsolve/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace cimsolve {
namespace {

// Walks every assignment of the spins listed in `free` in Gray-code order,
// starting from `spins`, with O(degree) energy and field updates per step.
// visit(energy, spins) is called 2^|free| times.
template <class Visit>
void gray_enumerate(const IsingInstance& inst, std::vector<Spin> spins, std::span<const std::size_t> free,
                    Visit&& visit) {
  std::vector<double> h = local_fields(inst, spins);
  double e = 0.0;
  for (std::size_t i = 0; i < spins.size(); ++i) e += spins[i] * h[i];
  e *= -0.5;
  visit(e, spins);
  const std::uint64_t count = std::uint64_t{1} << free.size();
  for (std::uint64_t k = 1; k < count; ++k) {
    const std::size_t i = free[static_cast<std::size_t>(std::countr_zero(k))];
    e += 2.0 * spins[i] * h[i];
    spins[i] = static_cast<Spin>(-spins[i]);
    const double twice = 2.0 * spins[i];
    for (const Neighbor& nb : inst.neighbors(i)) h[nb.index] += twice * nb.weight;
    visit(e, spins);
  }
}

double energy_tolerance(const IsingInstance& inst) {
  double s = 0.0;
  for (const Coupling& c : inst.edges()) s += std::abs(c.value);
  return 1e-10 * (1.0 + s);
}

struct Shard {
  std::vector<Spin> start;
  std::vector<std::size_t> free;
};

// Spin 0 is fixed to +1 (global flip symmetry). The highest `bits` of the
// remaining spins select the shard; the rest are Gray-enumerated.
std::vector<Shard> make_shards(std::size_t n) {
  const std::size_t free_count = n - 1;
  const std::size_t bits = std::min<std::size_t>(free_count, 6);
  const std::size_t inner = free_count - bits;
  std::vector<std::size_t> free(inner);
  for (std::size_t k = 0; k < inner; ++k) free[k] = 1 + k;
  std::vector<Shard> shards;
  for (std::size_t s = 0; s < (std::size_t{1} << bits); ++s) {
    std::vector<Spin> start(n, 1);
    for (std::size_t b = 0; b < bits; ++b) {
      if ((s >> b) & 1u) start[1 + inner + b] = -1;
    }
    shards.push_back({std::move(start), free});
  }
  return shards;
}

template <class Work>
void for_each_shard(std::size_t shard_count, std::size_t threads, Work&& work) {
  threads = std::max<std::size_t>(1, std::min(threads, shard_count));
  if (threads == 1) {
    for (std::size_t s = 0; s < shard_count; ++s) work(s);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t s = next++; s < shard_count; s = next++) work(s);
    });
  }
}

std::uint32_t to_mask(const std::vector<Spin>& s) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0) m |= std::uint32_t{1} << i;
  }
  return m;
}

IsingInstance without_edge(const IsingInstance& inst, std::size_t a, std::size_t b) {
  std::vector<Coupling> edges = inst.edges();
  const auto lo = std::min(a, b), hi = std::max(a, b);
  const auto it = std::find_if(edges.begin(), edges.end(), [&](const Coupling& c) { return c.i == lo && c.j == hi; });
  if (it == edges.end()) {
    throw std::invalid_argument("cannot remove coupling (" + std::to_string(a) + ", " + std::to_string(b) +
                                "): not present");
  }
  edges.erase(it);
  return IsingInstance(inst.size(), edges, inst.label());
}

struct GibbsSums {
  double log_z;
  double mean_energy;
  std::vector<double> magnetizations;
};

GibbsSums gibbs(const IsingInstance& inst, double beta, std::optional<std::pair<std::size_t, Spin>> clamp) {
  const std::size_t n = inst.size();
  std::vector<Spin> start(n, 1);
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (clamp && clamp->first == i) {
      start[i] = clamp->second;
    } else {
      free.push_back(i);
    }
  }
  double emin = std::numeric_limits<double>::infinity();
  gray_enumerate(inst, start, free, [&](double e, const std::vector<Spin>&) { emin = std::min(emin, e); });

  double z = 0.0, ez = 0.0;
  std::vector<double> m(n, 0.0);
  gray_enumerate(inst, start, free, [&](double e, const std::vector<Spin>& s) {
    const double w = std::exp(-beta * (e - emin));
    z += w;
    ez += w * e;
    for (std::size_t i = 0; i < n; ++i) m[i] += w * s[i];
  });
  for (double& v : m) v /= z;
  if (clamp) m[clamp->first] = clamp->second;
  return {std::log(z) - beta * emin, ez / z, std::move(m)};
}

}  // namespace

GroundTruth exhaustive_ground_states(const IsingInstance& instance, const OracleOptions& options) {
  const std::size_t n = instance.size();
  if (n > kOracleMaxSpins) {
    throw std::invalid_argument("exhaustive enumeration is capped at " + std::to_string(kOracleMaxSpins) +
                                " spins; instance has " + std::to_string(n));
  }
  const auto shards = make_shards(n);
  const double tol = energy_tolerance(instance);

  // Pass 1: minimum per shard.
  std::vector<double> shard_min(shards.size(), std::numeric_limits<double>::infinity());
  for_each_shard(shards.size(), options.threads, [&](std::size_t s) {
    double best = std::numeric_limits<double>::infinity();
    gray_enumerate(instance, shards[s].start, shards[s].free,
                   [&](double e, const std::vector<Spin>&) { best = std::min(best, e); });
    shard_min[s] = best;
  });
  const double emin = *std::min_element(shard_min.begin(), shard_min.end());

  // Pass 2: collect representatives within tolerance of the minimum.
  const std::size_t rep_cap = std::max<std::size_t>(1, options.max_states / 2);
  std::vector<std::vector<std::uint32_t>> found(shards.size());
  std::vector<std::size_t> counts(shards.size(), 0);
  for_each_shard(shards.size(), options.threads, [&](std::size_t s) {
    if (shard_min[s] > emin + tol) return;
    gray_enumerate(instance, shards[s].start, shards[s].free, [&](double e, const std::vector<Spin>& sp) {
      if (e <= emin + tol) {
        ++counts[s];
        if (found[s].size() < rep_cap) found[s].push_back(to_mask(sp));
      }
    });
  });

  GroundTruth out;
  std::vector<std::uint32_t> reps;
  for (std::size_t s = 0; s < shards.size(); ++s) {
    out.degeneracy += 2 * counts[s];
    reps.insert(reps.end(), found[s].begin(), found[s].end());
  }
  if (reps.size() > rep_cap) reps.resize(rep_cap);
  out.truncated = out.degeneracy > 2 * reps.size();

  std::vector<std::vector<Spin>> states;
  states.reserve(2 * reps.size());
  for (std::uint32_t m : reps) {
    std::vector<Spin> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<Spin>(((m >> i) & 1u) ? -1 : 1);
    std::vector<Spin> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<Spin>(-s[i]);
    states.push_back(std::move(s));
    states.push_back(std::move(f));
  }
  std::sort(states.begin(), states.end());
  out.ground_energy = std::numeric_limits<double>::infinity();
  for (auto& s : states) {
    out.ground_states.emplace_back(instance, std::move(s));
    out.ground_energy = std::min(out.ground_energy, out.ground_states.back().energy());
  }
  return out;
}

ExactMoments exact_moments(const IsingInstance& instance, double beta) {
  if (instance.size() > kMomentsMaxSpins) {
    throw std::invalid_argument("exact moments are capped at " + std::to_string(kMomentsMaxSpins) + " spins");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
  GibbsSums g = gibbs(instance, beta, std::nullopt);
  return {beta, g.log_z, g.mean_energy, std::move(g.magnetizations)};
}

std::vector<double> exact_cavity_magnetizations(const IsingInstance& instance, double beta, const CavitySpec& spec) {
  const std::size_t n = instance.size();
  if (n > kMomentsMaxSpins) {
    throw std::invalid_argument("exact magnetizations are capped at " + std::to_string(kMomentsMaxSpins) + " spins");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
  if (spec.clamp) {
    if (spec.clamp->first >= n) throw std::invalid_argument("clamped spin index out of range");
    if (spec.clamp->second != 1 && spec.clamp->second != -1) throw std::invalid_argument("clamp value must be +/-1");
  }
  if (spec.removed_edge) {
    const auto [a, b] = *spec.removed_edge;
    if (a >= n || b >= n || a == b) throw std::invalid_argument("removed coupling index invalid");
    return gibbs(without_edge(instance, a, b), beta, spec.clamp).magnetizations;
  }
  return gibbs(instance, beta, spec.clamp).magnetizations;
}

}  // namespace cimsolve
