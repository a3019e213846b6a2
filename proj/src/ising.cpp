#include "cimsolve/ising.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "cimsolve/kernels.hpp"

namespace cimsolve {
namespace {

void validate_spins(const IsingInstance& instance, std::span<const Spin> spins) {
  if (spins.size() != instance.size()) {
    throw std::invalid_argument("spin vector has length " + std::to_string(spins.size()) + ", instance has " +
                                std::to_string(instance.size()) + " spins");
  }
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] != 1 && spins[i] != -1) {
      throw std::invalid_argument("spin " + std::to_string(i) + " is not +/-1");
    }
  }
}

double field_at(const IsingInstance& instance, std::span<const Spin> spins, std::size_t i) {
  double h = 0.0;
  for (const Neighbor& nb : instance.neighbors(i)) h += nb.weight * spins[nb.index];
  return h;
}

}  // namespace

IsingInstance::IsingInstance(std::size_t n, std::span<const Coupling> couplings, std::string label, Storage storage)
    : label_(std::move(label)) {
  if (n == 0) throw std::invalid_argument("instance needs at least one spin");
  std::vector<Coupling> upper;
  upper.reserve(couplings.size());
  for (const Coupling& c : couplings) {
    if (c.i >= n || c.j >= n) {
      throw std::invalid_argument("coupling (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                                  ") out of range for n = " + std::to_string(n));
    }
    if (c.i == c.j) throw std::invalid_argument("diagonal coupling J_" + std::to_string(c.i) + std::to_string(c.i));
    if (!std::isfinite(c.value)) throw std::invalid_argument("non-finite coupling value");
    upper.push_back(c.i < c.j ? c : Coupling{c.j, c.i, c.value});
  }
  std::sort(upper.begin(), upper.end(),
            [](const Coupling& a, const Coupling& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  for (std::size_t k = 1; k < upper.size(); ++k) {
    if (upper[k].i == upper[k - 1].i && upper[k].j == upper[k - 1].j) {
      throw std::invalid_argument("duplicate coupling (" + std::to_string(upper[k].i) + ", " +
                                  std::to_string(upper[k].j) + ")");
    }
  }
  std::erase_if(upper, [](const Coupling& c) { return c.value == 0.0; });
  build(n, std::move(upper), storage);
}

IsingInstance IsingInstance::from_matrix(std::size_t n, std::span<const double> matrix, std::string label,
                                         Storage storage) {
  if (n == 0) throw std::invalid_argument("instance needs at least one spin");
  if (matrix.size() != n * n) throw std::invalid_argument("matrix size does not match n*n");
  std::vector<Coupling> upper;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i * n + i] != 0.0) throw std::invalid_argument("nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = matrix[i * n + j];
      if (a != matrix[j * n + i]) {
        throw std::invalid_argument("asymmetric couplings at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite coupling value");
      if (a != 0.0) upper.push_back({i, j, a});
    }
  }
  IsingInstance inst;
  inst.label_ = std::move(label);
  inst.build(n, std::move(upper), storage);
  return inst;
}

void IsingInstance::build(std::size_t n, std::vector<Coupling> upper, Storage storage) {
  n_ = n;
  std::vector<std::size_t> deg(n, 0);
  for (const Coupling& c : upper) {
    ++deg[c.i];
    ++deg[c.j];
  }
  row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) row_ptr_[i + 1] = row_ptr_[i] + deg[i];
  nbr_.resize(row_ptr_[n]);
  std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  // upper is sorted by (i, j), so each row comes out sorted by neighbour index.
  for (const Coupling& c : upper) nbr_[fill[c.j]++] = {static_cast<std::uint32_t>(c.i), c.value};
  for (const Coupling& c : upper) nbr_[fill[c.i]++] = {static_cast<std::uint32_t>(c.j), c.value};
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(nbr_.begin() + row_ptr_[i], nbr_.begin() + row_ptr_[i + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  }

  const bool dense = storage == Storage::dense || (storage == Storage::automatic && n <= kDenseLimit);
  dense_.clear();
  if (dense) dense_ = to_dense();
}

double IsingInstance::coupling(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("coupling index out of range");
  if (!dense_.empty()) return dense_[i * n_ + j];
  const auto row = neighbors(i);
  const auto it = std::lower_bound(row.begin(), row.end(), j,
                                   [](const Neighbor& nb, std::size_t idx) { return nb.index < idx; });
  return (it != row.end() && it->index == j) ? it->weight : 0.0;
}

std::vector<Coupling> IsingInstance::edges() const {
  std::vector<Coupling> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < n_; ++i) {
    for (const Neighbor& nb : neighbors(i)) {
      if (nb.index > i) out.push_back({i, nb.index, nb.weight});
    }
  }
  return out;
}

void IsingInstance::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("multiply: dimension mismatch");
  if (!dense_.empty()) {
    kernels::active().matvec(dense_.data(), n_, x.data(), y.data());
    return;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (const Neighbor& nb : neighbors(i)) s += nb.weight * x[nb.index];
    y[i] = s;
  }
}

std::vector<double> IsingInstance::to_dense() const {
  if (!dense_.empty()) return dense_;
  std::vector<double> m(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (const Neighbor& nb : neighbors(i)) m[i * n_ + nb.index] = nb.weight;
  }
  return m;
}

double IsingInstance::frobenius_norm() const {
  double s = 0.0;
  for (const Neighbor& nb : nbr_) s += nb.weight * nb.weight;
  return std::sqrt(s);
}

double IsingInstance::max_row_sum() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (const Neighbor& nb : neighbors(i)) s += std::abs(nb.weight);
    best = std::max(best, s);
  }
  return best;
}

IsingInstance IsingInstance::negated() const {
  IsingInstance out = *this;
  for (Neighbor& nb : out.nbr_) nb.weight = -nb.weight;
  for (double& v : out.dense_) v = -v;
  return out;
}

IsingInstance IsingInstance::with_label(std::string label) const {
  IsingInstance out = *this;
  out.label_ = std::move(label);
  return out;
}

SpinConfig::SpinConfig(const IsingInstance& instance, std::vector<Spin> spins)
    : spins_(std::move(spins)), energy_(cimsolve::energy(instance, spins_)) {}

SpinConfig SpinConfig::flipped() const {
  std::vector<Spin> s(spins_.size());
  std::transform(spins_.begin(), spins_.end(), s.begin(), [](Spin v) { return static_cast<Spin>(-v); });
  return SpinConfig(std::move(s), energy_);
}

double energy(const IsingInstance& instance, std::span<const Spin> spins) {
  validate_spins(instance, spins);
  double s = 0.0;
  for (std::size_t i = 0; i < spins.size(); ++i) s += spins[i] * field_at(instance, spins, i);
  return -0.5 * s;
}

std::vector<double> local_fields(const IsingInstance& instance, std::span<const Spin> spins) {
  validate_spins(instance, spins);
  std::vector<double> h(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) h[i] = field_at(instance, spins, i);
  return h;
}

bool is_local_minimum(const IsingInstance& instance, std::span<const Spin> spins) {
  const auto h = local_fields(instance, spins);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (spins[i] * h[i] < 0.0) return false;
  }
  return true;
}

double quadratic_energy(const IsingInstance& instance, std::span<const double> y) {
  std::vector<double> jy(y.size());
  instance.multiply(y, jy);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * jy[i];
  return -0.5 * s;
}

std::vector<Spin> round_spins(std::span<const double> x) {
  std::vector<Spin> s(x.size());
  std::transform(x.begin(), x.end(), s.begin(), [](double v) { return static_cast<Spin>(v < 0.0 ? -1 : 1); });
  return s;
}

SpinConfig round_spins(const IsingInstance& instance, std::span<const double> x) {
  return SpinConfig(instance, round_spins(x));
}

IsingInstance generate_sk(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("SK instance needs n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<Coupling> c;
  c.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) c.push_back({i, j, normal(rng)});
  }
  return IsingInstance(n, c, "sk-n" + std::to_string(n) + "-seed" + std::to_string(seed));
}

IsingInstance generate_ring(std::size_t n, int sign) {
  if (n < 3) throw std::invalid_argument("ring needs n >= 3");
  if (sign != 1 && sign != -1) throw std::invalid_argument("ring sign must be +1 or -1");
  std::vector<Coupling> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back({i, (i + 1) % n, static_cast<double>(sign)});
  return IsingInstance(n, c, std::string(sign < 0 ? "afm" : "fm") + "-ring-n" + std::to_string(n));
}

}  // namespace cimsolve
