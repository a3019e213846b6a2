#pragma once

// Pairwise Ising model without external field.
//
// Sign convention used throughout the library:
//
//     H(s) = -1/2 sum_ij J_ij s_i s_j
//
// so J_ij > 0 is ferromagnetic. Inputs written for the opposite convention
// (gradient flow of +1/2 sum J x x) are brought in with IsingInstance::negated().

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cimsolve {

using Spin = std::int8_t;

struct Coupling {
  std::size_t i;
  std::size_t j;
  double value;
};

struct Neighbor {
  std::uint32_t index;
  double weight;
};

enum class Storage { automatic, dense, sparse };

/// Symmetric coupling matrix with zero diagonal.
///
/// Instances up to kDenseLimit spins keep a row-major dense copy that feeds
/// the SIMD matvec; every instance also carries a CSR adjacency list over its
/// nonzero couplings, which is what the message-passing solvers and the
/// incremental energy updates walk. Immutable after construction.
class IsingInstance {
 public:
  static constexpr std::size_t kDenseLimit = 512;

  /// Builds from an undirected coupling list. Each unordered pair may appear
  /// once; zero values are dropped.
  IsingInstance(std::size_t n, std::span<const Coupling> couplings, std::string label = {},
                Storage storage = Storage::automatic);

  /// Builds from a row-major n x n matrix. Rejects asymmetric input and
  /// nonzero diagonals (exact comparison).
  static IsingInstance from_matrix(std::size_t n, std::span<const double> matrix, std::string label = {},
                                   Storage storage = Storage::automatic);

  std::size_t size() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }
  bool is_dense() const noexcept { return !dense_.empty() || n_ == 0; }

  double coupling(std::size_t i, std::size_t j) const;
  std::span<const Neighbor> neighbors(std::size_t i) const {
    return {nbr_.data() + row_ptr_[i], nbr_.data() + row_ptr_[i + 1]};
  }
  std::size_t degree(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

  /// Nonzero couplings with i < j, ordered by (i, j).
  std::vector<Coupling> edges() const;
  std::size_t edge_count() const noexcept { return nbr_.size() / 2; }

  /// y = J x.
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Row-major dense copy (materialized on demand for sparse storage).
  std::vector<double> to_dense() const;

  double frobenius_norm() const;
  /// max_i sum_j |J_ij|; an upper bound on the spectral radius.
  double max_row_sum() const;

  IsingInstance negated() const;
  IsingInstance with_label(std::string label) const;

 private:
  IsingInstance() = default;
  void build(std::size_t n, std::vector<Coupling> upper, Storage storage);

  std::size_t n_ = 0;
  std::string label_;
  std::vector<double> dense_;
  std::vector<std::size_t> row_ptr_;
  std::vector<Neighbor> nbr_;
};

/// A +/-1 assignment together with its energy under one instance.
class SpinConfig {
 public:
  SpinConfig(const IsingInstance& instance, std::vector<Spin> spins);

  std::span<const Spin> spins() const noexcept { return spins_; }
  double energy() const noexcept { return energy_; }
  std::size_t size() const noexcept { return spins_.size(); }
  Spin operator[](std::size_t i) const { return spins_[i]; }

  /// Global flip; same energy.
  SpinConfig flipped() const;

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) { return a.spins_ == b.spins_; }

 private:
  SpinConfig(std::vector<Spin> spins, double energy) : spins_(std::move(spins)), energy_(energy) {}
  std::vector<Spin> spins_;
  double energy_ = 0.0;
};

// All of these validate length and that every entry is exactly +/-1, and
// throw std::invalid_argument otherwise.
double energy(const IsingInstance& instance, std::span<const Spin> spins);
std::vector<double> local_fields(const IsingInstance& instance, std::span<const Spin> spins);
bool is_local_minimum(const IsingInstance& instance, std::span<const Spin> spins);

/// -1/2 y^T J y for a real vector y.
double quadratic_energy(const IsingInstance& instance, std::span<const double> y);

/// Sign rounding; exact zeros go to +1.
std::vector<Spin> round_spins(std::span<const double> x);
SpinConfig round_spins(const IsingInstance& instance, std::span<const double> x);

/// Sherrington-Kirkpatrick couplings, J_ij ~ N(0, 1/n) for i < j.
IsingInstance generate_sk(std::size_t n, std::uint64_t seed);

/// Nearest-neighbour ring with periodic boundary, J_{i,i+1} = sign.
IsingInstance generate_ring(std::size_t n, int sign);

}  // namespace cimsolve
