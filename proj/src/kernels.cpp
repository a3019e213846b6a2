#include "cimsolve/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cimsolve::kernels {
namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(CIMSOLVE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(CIMSOLVE_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Isa parse_isa(std::string_view s) {
  if (s == "scalar") return Isa::scalar;
  if (s == "avx2") return Isa::avx2;
  if (s == "neon") return Isa::neon;
  throw std::invalid_argument("CIMSOLVE_ISA: unknown instruction set '" + std::string(s) + "'");
}

const KernelTable* resolve() {
  if (const char* env = std::getenv("CIMSOLVE_ISA"); env != nullptr && *env != '\0') {
    return &table(parse_isa(env));
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (isa_supported(isa)) return &table(isa);
  }
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{resolve()};
  return ptr;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) { return cpu_has(isa); }

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("instruction set '" + std::string(isa_name(isa)) +
                                "' is not available on this build/CPU");
  }
  switch (isa) {
#if defined(CIMSOLVE_HAVE_AVX2)
    case Isa::avx2:
      return detail::avx2_table();
#endif
#if defined(CIMSOLVE_HAVE_NEON)
    case Isa::neon:
      return detail::neon_table();
#endif
    default:
      return detail::scalar_table();
  }
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void force_isa(Isa isa) { current().store(&table(isa), std::memory_order_release); }

void matvec(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> y) {
  if (a.size() != n * n || x.size() != n || y.size() != n) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  active().matvec(a.data(), n, x.data(), y.data());
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  return active().dot(x.data(), y.data(), x.size());
}

double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

}  // namespace cimsolve::kernels
