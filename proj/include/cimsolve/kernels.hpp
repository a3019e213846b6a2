#pragma once

// Dense arithmetic kernels used by the amplitude integrators and TAP.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2/FMA variant and on AArch64 a NEON variant are compiled in and picked at
// runtime from the CPU feature bits. The environment variable CIMSOLVE_ISA
// (scalar|avx2|neon) overrides the automatic choice.
//
// Vector variants reassociate sums, so results agree with the scalar
// reference to rounding, not bit for bit. Within one ISA every kernel is
// deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace cimsolve::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // y = A x for a row-major n x n matrix.
  void (*matvec)(const double* a, std::size_t n, const double* x, double* y);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x_i^2
  double (*sum_squares)(const double* x, std::size_t n);
};

bool isa_supported(Isa isa);

/// Table currently in use. First call resolves CPU features and CIMSOLVE_ISA.
const KernelTable& active();

/// Table for a specific ISA; throws std::invalid_argument when the ISA is not
/// compiled in or not supported by this CPU.
const KernelTable& table(Isa isa);

/// Switch the process-wide table. Intended for tests and benchmarks.
void force_isa(Isa isa);

// Convenience wrappers over active().
void matvec(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
double sum_squares(std::span<const double> x);

namespace detail {
const KernelTable& scalar_table();
#if defined(CIMSOLVE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(CIMSOLVE_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace cimsolve::kernels
