#pragma once

// Belief propagation for pairwise Ising models at inverse temperature beta.
//
// The message on the directed edge i -> j is the cavity magnetization of i
// with the coupling J_ij removed:
//
//     m_{i->j} = tanh( sum_{k in N(i) \ j} atanh( tanh(beta J_ik) m_{k->i} ) )
//
// and the marginal is m_i = tanh( sum_{k in N(i)} atanh( tanh(beta J_ik) m_{k->i} ) ).
// Exact on trees.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cimsolve/ising.hpp"

namespace cimsolve {

/// Largest magnitude a message, magnetization or atanh argument may take.
inline constexpr double kMessageCap = 1.0 - 1e-15;

/// One message per directed edge, stored in the instance's adjacency order:
/// slot s in row i (neighbor j) holds m_{i->j}.
class MessageSet {
 public:
  /// All messages zero, nothing clamped.
  explicit MessageSet(const IsingInstance& instance, double damping = 0.5);

  /// Messages drawn from uniform(-spread, spread).
  static MessageSet random(const IsingInstance& instance, std::uint64_t seed, double spread = 0.1,
                           double damping = 0.5);

  /// Pins spin i: every outgoing message becomes value * kMessageCap and stays there.
  void clamp(std::size_t i, Spin value);
  Spin clamped(std::size_t i) const { return pinned_[i]; }

  std::span<const double> values() const noexcept { return m_; }
  std::span<double> values() noexcept { return m_; }
  /// Slot holding m_{j->i} for the slot holding m_{i->j}.
  std::span<const std::uint32_t> reverse() const noexcept { return reverse_; }
  std::size_t row_begin(std::size_t i) const { return offsets_[i]; }

  /// m_{i->j}; throws std::invalid_argument when J_ij = 0.
  double message(const IsingInstance& instance, std::size_t i, std::size_t j) const;

  std::size_t iteration = 0;
  double damping;

 private:
  std::vector<double> m_;
  std::vector<std::size_t> offsets_;  // row i owns slots [offsets_[i], offsets_[i+1])
  std::vector<std::uint32_t> reverse_;
  std::vector<Spin> pinned_;
};

struct BpStepResult {
  MessageSet messages;
  double max_change;
  std::size_t saturations;  // atanh arguments or outputs that hit the cap
};

/// Synchronous update of every message, then m <- (1 - damping) m_new + damping m_old.
BpStepResult bp_step(const IsingInstance& instance, const MessageSet& messages, double beta);

/// Marginals from the current messages. Clamped spins report their pinned value.
std::vector<double> bp_magnetizations(const IsingInstance& instance, const MessageSet& messages, double beta,
                                      std::size_t* saturations = nullptr);

struct BpOptions {
  double damping = 0.5;
  std::size_t max_iters = 1000;
  double tol = 1e-10;
  std::vector<std::pair<std::size_t, Spin>> clamps;
  /// Random-order in-place updates instead of the synchronous sweep.
  bool sequential = false;
  /// Starting messages; replaces the seeded random start. Its clamps and
  /// damping are kept, and `clamps` above is applied on top.
  std::optional<MessageSet> initial;
};

struct BpResult {
  MessageSet messages;
  std::vector<double> magnetizations;
  bool converged = false;
  std::size_t iterations = 0;  // sweeps performed, including the one that met tol
  std::size_t saturations = 0;
};

/// Throws std::invalid_argument for tol <= 0, damping outside [0, 1) or a bad clamp.
BpResult bp_run(const IsingInstance& instance, double beta, std::uint64_t seed, const BpOptions& options = {});

/// Rounds by sign (0 -> +1) and scores.
SpinConfig bp_energy_readout(const IsingInstance& instance, std::span<const double> magnetizations);

}  // namespace cimsolve
