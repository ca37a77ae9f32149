#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "specgap/errors.hpp"
#include "specgap/kernels.hpp"
#include "specgap/rng.hpp"

namespace specgap {

struct NormOptions {
  double tol = 1e-9;
  int max_iter = 10000;
  std::uint64_t seed = 0x5eedb00cULL;     // start-vector seed
  Eigen::Index full_reorth_cap = 6000;    // keep the basis and reorthogonalize below this dim
};

namespace detail {

inline double ldot(const double* a, const double* b, std::size_t n) {
  return kernels::dot(a, b, n);
}
inline double ldot(const std::complex<double>* a, const std::complex<double>* b, std::size_t n) {
  return kernels::zdotc(a, b, n).real();
}
inline double lnrm2_sq(const double* a, std::size_t n) { return kernels::nrm2_sq(a, n); }
inline double lnrm2_sq(const std::complex<double>* a, std::size_t n) { return kernels::znrm2_sq(a, n); }
inline void laxpy(double alpha, const double* x, double* y, std::size_t n) {
  kernels::axpy(alpha, x, y, n);
}
inline void laxpy(double alpha, const std::complex<double>* x, std::complex<double>* y, std::size_t n) {
  kernels::zaxpy({alpha, 0.0}, x, y, n);
}
inline void lscal(double alpha, double* x, std::size_t n) { kernels::scal(alpha, x, n); }
inline void lscal(double alpha, std::complex<double>* x, std::size_t n) { kernels::zscal(alpha, x, n); }

inline void fill_random(double* x, std::size_t n, SplitMix64& rng) {
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.next_normal();
}
inline void fill_random(std::complex<double>* x, std::size_t n, SplitMix64& rng) {
  for (std::size_t i = 0; i < n; ++i) x[i] = {rng.next_normal(), rng.next_normal()};
}

// full inverse-iteration-free reorthogonalization against a stored basis
template <typename Scalar>
void reorthogonalize(const std::vector<std::vector<Scalar>>& basis, Scalar* w, std::size_t n);

template <>
inline void reorthogonalize(const std::vector<std::vector<double>>& basis, double* w, std::size_t n) {
  for (const auto& v : basis) {
    const double c = kernels::dot(v.data(), w, n);
    kernels::axpy(-c, v.data(), w, n);
  }
}
template <>
inline void reorthogonalize(const std::vector<std::vector<std::complex<double>>>& basis,
                            std::complex<double>* w, std::size_t n) {
  for (const auto& v : basis) {
    const std::complex<double> c = kernels::zdotc(v.data(), w, n);
    kernels::zaxpy(-c, v.data(), w, n);
  }
}

}  // namespace detail

/**
 * Largest |eigenvalue| of a Hermitian operator given through its apply
 * callback, by the Lanczos three-term recurrence with tridiagonal Ritz
 * extraction (both spectrum ends tracked, so exactly symmetric spectra are
 * handled). Deterministic given the start-vector seed. Throws
 * ConvergenceError carrying the last bracket when the iteration cap is hit.
 *
 * Apply signature: apply(const Scalar* x, Scalar* y) writing y = A x.
 */
template <typename Scalar, typename Apply>
double lanczos_extremal(Apply&& apply, Eigen::Index dim, const NormOptions& opt = {}) {
  if (dim <= 0) return 0.0;
  const auto n = static_cast<std::size_t>(dim);

  std::vector<Scalar> v(n), v_prev(n, Scalar(0)), w(n);
  SplitMix64 rng(opt.seed);
  detail::fill_random(v.data(), n, rng);
  {
    const double nv = std::sqrt(detail::lnrm2_sq(v.data(), n));
    detail::lscal(1.0 / nv, v.data(), n);
  }

  const bool keep_basis = dim <= opt.full_reorth_cap;
  std::vector<std::vector<Scalar>> basis;
  if (keep_basis) basis.push_back(v);

  std::vector<double> alphas, betas;
  double beta_prev = 0.0;
  double estimate = 0.0, prev_estimate = -1.0;
  double last_residual = std::numeric_limits<double>::infinity();
  double scale = 0.0;

  const int iters = static_cast<int>(std::min<Eigen::Index>(opt.max_iter, dim + 2));
  for (int j = 1; j <= iters; ++j) {
    apply(v.data(), w.data());
    const double alpha = detail::ldot(v.data(), w.data(), n);
    detail::laxpy(-alpha, v.data(), w.data(), n);
    if (beta_prev != 0.0) detail::laxpy(-beta_prev, v_prev.data(), w.data(), n);
    if (keep_basis) detail::reorthogonalize(basis, w.data(), n);
    double beta = std::sqrt(detail::lnrm2_sq(w.data(), n));
    alphas.push_back(alpha);
    scale = std::max({scale, std::abs(alpha), beta});

    const bool breakdown = beta <= 1e-14 * std::max(scale, 1.0);
    const bool check = breakdown || j == iters || (j % 8 == 0) || j <= 4 || dim <= 64;
    if (check) {
      const auto k = static_cast<Eigen::Index>(alphas.size());
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alphas.data(), k);
      Eigen::VectorXd sub(k > 1 ? k - 1 : 0);
      for (Eigen::Index i = 0; i + 1 < k; ++i) sub[i] = betas[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const Eigen::VectorXd& ev = es.eigenvalues();
      const double lo = ev[0], hi = ev[k - 1];
      const bool hi_wins = std::abs(hi) >= std::abs(lo);
      estimate = std::max(std::abs(lo), std::abs(hi));
      const Eigen::VectorXd& y = es.eigenvectors().col(hi_wins ? k - 1 : 0);
      last_residual = beta * std::abs(y[k - 1]);
      if (breakdown) return estimate;  // invariant subspace exhausted: exact
      const double tol_abs = opt.tol * std::max(estimate, 1e-300);
      if (last_residual <= tol_abs && prev_estimate >= 0.0 &&
          std::abs(estimate - prev_estimate) <= tol_abs)
        return estimate;
      prev_estimate = estimate;
    }

    betas.push_back(beta);
    beta_prev = beta;
    std::swap(v_prev, v);
    // v = w / beta
    v.assign(w.begin(), w.end());
    detail::lscal(1.0 / beta, v.data(), n);
    if (keep_basis) basis.push_back(v);
  }
  throw ConvergenceError("lanczos_extremal: no convergence within iteration cap",
                         estimate, estimate + last_residual);
}

}  // namespace specgap
