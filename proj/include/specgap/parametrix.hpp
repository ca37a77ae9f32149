#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specgap/hyperbolic.hpp"

namespace specgap {

/**
 * Staggered cusp cutoffs. A fixed smooth template (quintic smoothstep over
 * a width-2.5 window, so both template derivative sups are ≤ 1) is rescaled
 * by κ/60; the resulting χ⁺ rises on [1, τ_n] with τ_n = (60/κ)(τ₀-1)+1 and
 * satisfies the certified bounds sup|(χ⁺)'| ≤ κ/30 and
 * sup|(χ⁺)'' - (χ⁺)'| ≤ κ/30. χ⁻ rises on [τ_n, 2τ_n], which gives the
 * stagger identity χ⁺χ⁻ = χ⁻ pointwise. Construction re-verifies the
 * invariants on a 10⁴-point grid.
 */
struct CutoffPair {
  double kappa = 1.0;
  double tau0 = 0.0;   // template transition end
  double tau_n = 0.0;  // χ⁺ reaches 1 here

  double chi_plus(double t) const;
  double chi_plus_d1(double t) const;
  double chi_plus_d2(double t) const;
  double chi_minus(double t) const;

  double grad_sup() const;     // grid-sampled sup |(χ⁺)'|
  double laplace_sup() const;  // grid-sampled sup |(χ⁺)'' - (χ⁺)'|
};

CutoffPair build_cutoffs(double kappa);

/// Free resolvent kernel R_H(s;r) on the upper half-plane,
/// (1/4π)∫₀¹ (t(1-t))^{s-1} (t + sinh²(r/2))^{-s} dt, by adaptive
/// Gauss-Kronrod after the endpoint substitutions t = u², 1-t = v².
double resolvent_kernel(double s, double r, double rel_tol = 1e-11);
/// ∂R/∂r by differentiation under the integral sign.
double resolvent_kernel_dr(double s, double r, double rel_tol = 1e-11);
/// closed form at s=1: (1/2π) log coth(r/2)
double resolvent_closed_form_s1(double r);

/// truncation window: χ_T(r) = dec(r - T), smooth, 1 below T, 0 above T+1
double trunc_window(double u);     // dec template on [0,1]
double trunc_window_d1(double u);
double trunc_window_d2(double u);

/// Remainder kernel of the truncated resolvent,
///   L^(T)(s;r₀) = (-χ_T'' - χ_T'/tanh r₀) R(s;r₀) - 2 χ_T' ∂R/∂r(s;r₀),
/// identically zero outside [T, T+1].
double remainder_kernel(double s, double T, double r0);

struct SDerivativeReport {
  double max_abs = 0.0;       // max |∂L/∂s| over the grid at step h
  double max_abs_half = 0.0;  // same at h/2
  double rel_change = 0.0;
};
SDerivativeReport kernel_s_derivative_check(double T, double h = 1e-4);

/// spherical function φ₀(r) = (1/π)∫₀^π (cosh r - sinh r cosθ)^{-1/2} dθ
double spherical_phi0(double r);

struct NormEnvelope {
  double schur_plain = 0.0;     // 2π ∫ |L| sinh r dr — Young bound on L²(H)
  double schur_weighted = 0.0;  // 2π ∫ |L| φ₀ sinh r dr — spherical-transform bound
  double envelope_c = 0.0;      // schur_weighted / (T e^{(1/2-s)T})
  double kappa_pairing = 0.0;   // 4 (log T)²/T²
  double decay_value = 0.0;     // T e^{-T √κ} under the pairing
  bool decay_ok = false;        // < 1/5
};
NormEnvelope operator_norm_envelope(double s, double T);

/// radial samples of R, ∂R/∂r and L^(T), with positivity/support checks
struct KernelGrid {
  double s = 0.0, T = 0.0;
  std::vector<double> r, R, dR, L;
};
KernelGrid make_kernel_grid(double s, double T, const std::vector<double>& r_points);

/// dense radial table of L^(T)(s;·) on [T, T+1] for fast interpolation
class KernelTable {
 public:
  KernelTable(double s, double T, int npts = 4097);
  double s() const { return s_; }
  double T() const { return T_; }
  /// linear interpolation; exactly zero outside [T, T+1]
  double value(double r) const;

 private:
  double s_, T_, dr_;
  std::vector<double> vals_;
};

struct GridSpec {
  int nx = 15;
  int ny = 15;
  double y_min = 0.25;
  double y_max = -1.0;       // auto: 2 τ_n e^{T+1}
  bool area_uniform = true;  // sample uniformly in u = -1/y (exact cell areas)
};

struct QuadratureGrid {
  std::vector<double> xs, ys, w, sqrt_w;
  double area_expected = 0.0, weight_sum = 0.0;
  std::size_t size() const { return xs.size(); }
};

/// throws GridError when the weight sum misses the region area by > 5%
QuadratureGrid make_grid(const GridSpec& spec, double T, const CutoffPair& cutoffs);

/**
 * Discretized a_γ(s): node×node matrix of the kernel
 * L^(T)(s; d(γ x_i, y_j)) (1 - χ⁻(y_j)) in the weighted (orthonormal) node
 * basis, i.e. entries √w_i · k(x_i,y_j) · √w_j, so the HS norm is the
 * Frobenius norm and the SVD is the operator SVD.
 */
struct DiscretizedAGamma {
  ReducedWord gamma;
  double s = 0.0, T = 0.0;
  Eigen::MatrixXd matrix;
  double hs_norm = 0.0;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd svd_u, svd_v;
};

DiscretizedAGamma discretize_a_gamma(const SurfaceModel& model, const ReducedWord& gamma,
                                     double s, double T, const CutoffPair& cutoffs,
                                     const QuadratureGrid& grid,
                                     const KernelTable* table = nullptr);

struct SvdTruncation {
  Eigen::Index rank = 0;
  double target = 0.0;          // 1/(20 |S(T)|)
  double achieved_error = 0.0;  // s_{rank+1} (0 at full rank)
  double sufficient_rank_bound = 0;  // 400 · hs² · |S(T)|²
  Eigen::MatrixXd truncated;    // rank-truncated matrix
};

/// smallest rank with s_{r+1} ≤ 1/(20 s_size)
SvdTruncation svd_truncate(const DiscretizedAGamma& ag, std::size_t s_size);

/// ‖a_γ(s₁) - a_γ(s₂)‖ / |s₁ - s₂| on a shared grid
double deviation_ratio(const SurfaceModel& model, const ReducedWord& gamma, double s1,
                       double s2, double T, const CutoffPair& cutoffs,
                       const QuadratureGrid& grid);

}  // namespace specgap
