// NEON variants for aarch64 (NEON is baseline there, no runtime check needed).

#include "specgap/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace specgap::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double nrm2_sq_neon(const double* a, std::size_t n) { return dot_neon(a, a, n); }

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_neon(double alpha, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

cplx zdotc_neon(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i < n; ++i) {
    const float64x2_t va = vld1q_f64(pa + 2 * i);  // [ar ai]
    const float64x2_t vb = vld1q_f64(pb + 2 * i);  // [br bi]
    acc_re = vfmaq_f64(acc_re, va, vb);            // [ar*br, ai*bi]
    const float64x2_t vb_sw = vextq_f64(vb, vb, 1);  // [bi br]
    acc_im = vfmaq_f64(acc_im, va, vb_sw);           // [ar*bi, ai*br]
  }
  re = vaddvq_f64(acc_re);
  im = vgetq_lane_f64(acc_im, 0) - vgetq_lane_f64(acc_im, 1);
  return {re, im};
}

double znrm2_sq_neon(const cplx* a, std::size_t n) {
  return nrm2_sq_neon(reinterpret_cast<const double*>(a), 2 * n);
}

void zaxpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  scalar::zaxpy(alpha, x, y, n);
}

void zscal_neon(double alpha, cplx* x, std::size_t n) {
  scal_neon(alpha, reinterpret_cast<double*>(x), 2 * n);
}

void cosh_dist_row_neon(double ax, double ay, const double* xs, const double* ys,
                        double* out, std::size_t n) {
  const float64x2_t vax = vdupq_n_f64(ax);
  const float64x2_t vay = vdupq_n_f64(ay);
  const float64x2_t vhalf = vdupq_n_f64(0.5 / ay);
  const float64x2_t vone = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vax, vld1q_f64(xs + i));
    const float64x2_t vy = vld1q_f64(ys + i);
    const float64x2_t dy = vsubq_f64(vay, vy);
    const float64x2_t ss = vfmaq_f64(vmulq_f64(dy, dy), dx, dx);
    vst1q_f64(out + i, vaddq_f64(vone, vdivq_f64(vmulq_f64(ss, vhalf), vy)));
  }
  const double half_inv_ay = 0.5 / ay;
  for (; i < n; ++i) {
    const double dx = ax - xs[i];
    const double dy = ay - ys[i];
    out[i] = 1.0 + (dx * dx + dy * dy) * half_inv_ay / ys[i];
  }
}

const Backend kNeonBackend = {
    dot_neon,   nrm2_sq_neon, axpy_neon,  scal_neon,          zdotc_neon,
    znrm2_sq_neon, zaxpy_neon, zscal_neon, cosh_dist_row_neon, "neon",
};

}  // namespace

const Backend* neon_backend() { return &kNeonBackend; }

}  // namespace specgap::kernels

#endif  // aarch64
