#include <arm_neon.h>

#include "cimsolve/kernels.hpp"

namespace cimsolve::kernels::detail {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void matvec_neon(const double* a, std::size_t n, const double* x, double* y) {
  for (std::size_t r = 0; r < n; ++r) y[r] = dot_neon(a + r * n, x, n);
}

double sum_squares_neon(const double* x, std::size_t n) { return dot_neon(x, x, n); }

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{Isa::neon, &matvec_neon, &dot_neon, &sum_squares_neon};
  return t;
}

}  // namespace cimsolve::kernels::detail
