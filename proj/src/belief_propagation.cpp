#include "cimsolve/belief_propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace cimsolve {
namespace {

double capped(double v, std::size_t& saturations) {
  if (v > kMessageCap) {
    ++saturations;
    return kMessageCap;
  }
  if (v < -kMessageCap) {
    ++saturations;
    return -kMessageCap;
  }
  return v;
}

// Position of j inside row i, or npos.
std::size_t position_in_row(const IsingInstance& instance, std::size_t i, std::size_t j) {
  const auto row = instance.neighbors(i);
  const auto it = std::lower_bound(row.begin(), row.end(), j,
                                   [](const Neighbor& nb, std::size_t idx) { return nb.index < idx; });
  if (it == row.end() || it->index != j) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - row.begin());
}

// Writes the undamped outgoing messages of spin i, computed from `src`, into dst.
void update_spin(const IsingInstance& instance, const MessageSet& src, std::span<double> dst, std::size_t i,
                 double beta, std::vector<double>& u, std::size_t& saturations) {
  const auto row = instance.neighbors(i);
  const std::size_t base = src.row_begin(i);
  if (src.clamped(i) != 0) {
    std::fill_n(dst.begin() + static_cast<std::ptrdiff_t>(base), row.size(), src.clamped(i) * kMessageCap);
    return;
  }
  const auto m = src.values();
  const auto rev = src.reverse();
  u.resize(row.size());
  double total = 0.0;
  for (std::size_t s = 0; s < row.size(); ++s) {
    u[s] = std::atanh(capped(std::tanh(beta * row[s].weight) * m[rev[base + s]], saturations));
    total += u[s];
  }
  for (std::size_t s = 0; s < row.size(); ++s) dst[base + s] = capped(std::tanh(total - u[s]), saturations);
}

}  // namespace

MessageSet::MessageSet(const IsingInstance& instance, double damping_)
    : damping(damping_), offsets_(instance.size() + 1, 0), pinned_(instance.size(), 0) {
  const std::size_t n = instance.size();
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + instance.degree(i);
  m_.assign(offsets_[n], 0.0);
  reverse_.resize(offsets_[n]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = instance.neighbors(i);
    for (std::size_t s = 0; s < row.size(); ++s) {
      const std::size_t j = row[s].index;
      reverse_[offsets_[i] + s] = static_cast<std::uint32_t>(offsets_[j] + position_in_row(instance, j, i));
    }
  }
}

MessageSet MessageSet::random(const IsingInstance& instance, std::uint64_t seed, double spread, double damping) {
  MessageSet out(instance, damping);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-spread, spread);
  for (double& v : out.m_) v = dist(rng);
  return out;
}

void MessageSet::clamp(std::size_t i, Spin value) {
  if (i >= pinned_.size()) throw std::invalid_argument("clamp index " + std::to_string(i) + " out of range");
  if (value != 1 && value != -1) throw std::invalid_argument("clamp value must be +1 or -1");
  pinned_[i] = value;
  std::fill(m_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
            m_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]), value * kMessageCap);
}

double MessageSet::message(const IsingInstance& instance, std::size_t i, std::size_t j) const {
  if (i >= instance.size() || j >= instance.size()) throw std::invalid_argument("message index out of range");
  const std::size_t pos = position_in_row(instance, i, j);
  if (pos == static_cast<std::size_t>(-1)) throw std::invalid_argument("no coupling between the two spins");
  return m_[offsets_[i] + pos];
}

BpStepResult bp_step(const IsingInstance& instance, const MessageSet& messages, double beta) {
  BpStepResult out{messages, 0.0, 0};
  auto dst = out.messages.values();
  std::vector<double> u;
  for (std::size_t i = 0; i < instance.size(); ++i) update_spin(instance, messages, dst, i, beta, u, out.saturations);
  const auto old = messages.values();
  const double lambda = messages.damping;
  for (std::size_t s = 0; s < dst.size(); ++s) {
    if (lambda > 0.0) dst[s] = (1.0 - lambda) * dst[s] + lambda * old[s];
    out.max_change = std::max(out.max_change, std::abs(dst[s] - old[s]));
  }
  ++out.messages.iteration;
  return out;
}

std::vector<double> bp_magnetizations(const IsingInstance& instance, const MessageSet& messages, double beta,
                                      std::size_t* saturations) {
  std::size_t sat = 0;
  const auto m = messages.values();
  const auto rev = messages.reverse();
  std::vector<double> out(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (messages.clamped(i) != 0) {
      out[i] = messages.clamped(i) * kMessageCap;
      continue;
    }
    const auto row = instance.neighbors(i);
    const std::size_t base = messages.row_begin(i);
    double total = 0.0;
    for (std::size_t s = 0; s < row.size(); ++s) {
      total += std::atanh(capped(std::tanh(beta * row[s].weight) * m[rev[base + s]], sat));
    }
    out[i] = capped(std::tanh(total), sat);
  }
  if (saturations) *saturations += sat;
  return out;
}

BpResult bp_run(const IsingInstance& instance, double beta, std::uint64_t seed, const BpOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("bp: tol must be > 0");
  if (!(options.damping >= 0.0 && options.damping < 1.0)) throw std::invalid_argument("bp: damping must lie in [0, 1)");

  std::mt19937_64 rng(seed);
  MessageSet msgs = options.initial ? *options.initial : MessageSet::random(instance, rng(), 0.1, options.damping);
  if (options.initial && msgs.values().size() != MessageSet(instance).values().size()) {
    throw std::invalid_argument("bp: initial messages do not match the instance");
  }
  if (!options.initial) msgs.damping = options.damping;
  for (const auto& [i, v] : options.clamps) msgs.clamp(i, v);

  BpResult out{msgs, {}, false, 0, 0};
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> fresh, u;

  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    double change = 0.0;
    if (options.sequential) {
      std::shuffle(order.begin(), order.end(), rng);
      auto cur = msgs.values();
      fresh.assign(cur.begin(), cur.end());
      for (std::size_t i : order) {
        update_spin(instance, msgs, fresh, i, beta, u, out.saturations);
        const std::size_t lo = msgs.row_begin(i), hi = lo + instance.degree(i);
        for (std::size_t s = lo; s < hi; ++s) {
          const double next = (1.0 - msgs.damping) * fresh[s] + msgs.damping * cur[s];
          change = std::max(change, std::abs(next - cur[s]));
          cur[s] = next;
        }
      }
      ++msgs.iteration;
    } else {
      BpStepResult step = bp_step(instance, msgs, beta);
      change = step.max_change;
      out.saturations += step.saturations;
      msgs = std::move(step.messages);
    }
    out.iterations = it;
    if (change < options.tol) {
      out.converged = true;
      break;
    }
  }
  out.magnetizations = bp_magnetizations(instance, msgs, beta, &out.saturations);
  out.messages = std::move(msgs);
  return out;
}

SpinConfig bp_energy_readout(const IsingInstance& instance, std::span<const double> magnetizations) {
  if (magnetizations.size() != instance.size()) throw std::invalid_argument("bp readout: length mismatch");
  return round_spins(instance, magnetizations);
}

}  // namespace cimsolve
