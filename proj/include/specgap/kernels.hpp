#pragma once

#include <complex>
#include <cstddef>

namespace specgap::kernels {

using cplx = std::complex<double>;

/**
 * Scalar reference kernels for the arithmetic inner loops (Lanczos vector
 * updates and batched hyperbolic-distance rows). The dispatched entry points
 * below select an AVX2 (x86) or NEON (aarch64) variant at runtime; tests
 * enforce equivalence with these references.
 */
namespace scalar {

double dot(const double* a, const double* b, std::size_t n);
double nrm2_sq(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);

cplx zdotc(const cplx* a, const cplx* b, std::size_t n);  // sum conj(a)*b
double znrm2_sq(const cplx* a, std::size_t n);
void zaxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void zscal(double alpha, cplx* x, std::size_t n);

// out[j] = cosh d((ax,ay), (xs[j],ys[j])) = 1 + ((ax-xs[j])^2+(ay-ys[j])^2)/(2 ay ys[j])
void cosh_dist_row(double ax, double ay, const double* xs, const double* ys,
                   double* out, std::size_t n);

}  // namespace scalar

struct Backend {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  cplx (*zdotc)(const cplx*, const cplx*, std::size_t);
  double (*znrm2_sq)(const cplx*, std::size_t);
  void (*zaxpy)(cplx, const cplx*, cplx*, std::size_t);
  void (*zscal)(double, cplx*, std::size_t);
  void (*cosh_dist_row)(double, double, const double*, const double*, double*, std::size_t);
  const char* name;
};

/// Active backend, selected once at startup from CPU capabilities.
const Backend& active();

/// Name of the selected backend: "scalar", "avx2" or "neon".
const char* active_backend_name();

#if defined(__x86_64__) || defined(_M_X64)
const Backend* avx2_backend();  // nullptr when unsupported at runtime
#endif
#if defined(__aarch64__)
const Backend* neon_backend();
#endif

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline double nrm2_sq(const double* a, std::size_t n) { return active().nrm2_sq(a, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
inline void scal(double alpha, double* x, std::size_t n) { active().scal(alpha, x, n); }
inline cplx zdotc(const cplx* a, const cplx* b, std::size_t n) { return active().zdotc(a, b, n); }
inline double znrm2_sq(const cplx* a, std::size_t n) { return active().znrm2_sq(a, n); }
inline void zaxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) { active().zaxpy(alpha, x, y, n); }
inline void zscal(double alpha, cplx* x, std::size_t n) { active().zscal(alpha, x, n); }
inline void cosh_dist_row(double ax, double ay, const double* xs, const double* ys,
                          double* out, std::size_t n) {
  active().cosh_dist_row(ax, ay, xs, ys, out, n);
}

}  // namespace specgap::kernels
