// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma;
// the dispatcher only installs it after a runtime CPU check.

#include "specgap/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace specgap::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double nrm2_sq_avx2(const double* a, std::size_t n) { return dot_avx2(a, a, n); }

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_avx2(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

// complex arrays as interleaved (re,im); one 256-bit vector holds 2 complex
cplx zdotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const __m256d conj_sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);  // {+,-,+,-} per (re,im)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);  // [ar0 ai0 ar1 ai1]
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    // re: ar*br + ai*bi
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    // im: ar*bi - ai*br  ->  multiply va by swapped vb with sign on second slot
    const __m256d vb_sw = _mm256_permute_pd(vb, 0x5);  // [bi0 br0 bi1 br1]
    acc_im = _mm256_fmadd_pd(_mm256_mul_pd(va, conj_sign), vb_sw, acc_im);
  }
  double re = hsum(acc_re), im = hsum(acc_im);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double znrm2_sq_avx2(const cplx* a, std::size_t n) {
  return nrm2_sq_avx2(reinterpret_cast<const double*>(a), 2 * n);
}

void zaxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d va_re = _mm256_set1_pd(alpha.real());
  const __m256d va_im = _mm256_set_pd(alpha.imag(), -alpha.imag(), alpha.imag(), -alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vx_sw = _mm256_permute_pd(vx, 0x5);
    __m256d vy = _mm256_loadu_pd(py + 2 * i);
    // (ar + i ai)(xr + i xi): re += ar*xr - ai*xi ; im += ar*xi + ai*xr
    vy = _mm256_fmadd_pd(va_re, vx, vy);
    vy = _mm256_fmadd_pd(va_im, vx_sw, vy);
    _mm256_storeu_pd(py + 2 * i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void zscal_avx2(double alpha, cplx* x, std::size_t n) {
  scal_avx2(alpha, reinterpret_cast<double*>(x), 2 * n);
}

void cosh_dist_row_avx2(double ax, double ay, const double* xs, const double* ys,
                        double* out, std::size_t n) {
  const __m256d vax = _mm256_set1_pd(ax);
  const __m256d vay = _mm256_set1_pd(ay);
  const __m256d vhalf = _mm256_set1_pd(0.5 / ay);
  const __m256d vone = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(vax, _mm256_loadu_pd(xs + i));
    const __m256d vy = _mm256_loadu_pd(ys + i);
    const __m256d dy = _mm256_sub_pd(vay, vy);
    const __m256d ss = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d q = _mm256_div_pd(_mm256_mul_pd(ss, vhalf), vy);
    _mm256_storeu_pd(out + i, _mm256_add_pd(vone, q));
  }
  const double half_inv_ay = 0.5 / ay;
  for (; i < n; ++i) {
    const double dx = ax - xs[i];
    const double dy = ay - ys[i];
    out[i] = 1.0 + (dx * dx + dy * dy) * half_inv_ay / ys[i];
  }
}

const Backend kAvx2Backend = {
    dot_avx2,   nrm2_sq_avx2, axpy_avx2,  scal_avx2,         zdotc_avx2,
    znrm2_sq_avx2, zaxpy_avx2, zscal_avx2, cosh_dist_row_avx2, "avx2",
};

}  // namespace

const Backend* avx2_backend() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")
             ? &kAvx2Backend
             : nullptr;
}

}  // namespace specgap::kernels

#endif  // x86_64
