#include "specgap/kernels.hpp"

#include <cstdlib>

namespace specgap::kernels {
namespace {

const Backend kScalarBackend = {
    scalar::dot,   scalar::nrm2_sq, scalar::axpy,  scalar::scal,
    scalar::zdotc, scalar::znrm2_sq, scalar::zaxpy, scalar::zscal,
    scalar::cosh_dist_row, "scalar",
};

const Backend& select() {
  if (std::getenv("SPECGAP_NO_SIMD") != nullptr) return kScalarBackend;
#if defined(__x86_64__) || defined(_M_X64)
  if (const Backend* b = avx2_backend()) return *b;
#endif
#if defined(__aarch64__)
  if (const Backend* b = neon_backend()) return *b;
#endif
  return kScalarBackend;
}

}  // namespace

const Backend& active() {
  static const Backend& backend = select();
  return backend;
}

const char* active_backend_name() { return active().name; }

}  // namespace specgap::kernels
