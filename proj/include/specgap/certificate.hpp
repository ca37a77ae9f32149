#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specgap/linearization.hpp"
#include "specgap/parametrix.hpp"

namespace specgap {

enum class CertFlavor { cover, bundle };

const char* cert_flavor_name(CertFlavor f);
CertFlavor cert_flavor_from_name(const std::string& name);

/**
 * The κ(n)/T(n) schedules. Bundle: T = √(log n)/(4√(32d+160)),
 * κ = 64(32d+160)(log log n)²/log n. Cover: T = √(log log n)/24,
 * κ = 4·24²(log log log n)²/log log n. The spectral window is
 * [1/2+√κ, 1] and the eigenvalue bound 1/4 − κ = s_min(1 − s_min).
 * At desk-scale n the bound is vacuous (κ > 1/4); that is expected.
 */
struct RateSchedule {
  CertFlavor flavor = CertFlavor::bundle;
  double n = 0.0;
  int d = 0;
  double T = 0.0;
  double kappa = 0.0;
  double s_min = 0.0;
  double gap_bound = 0.0;  // 1/4 - kappa
};

RateSchedule rate_schedule(CertFlavor flavor, double n, int d);

/// turning point of κ(n) and the crossing where the gap bound turns positive
struct CrossingReport {
  double turning_log_n = 0.0;    // log n past which κ decreases (cover: in log log n)
  double loglog_n_star = 0.0;    // ln ln n at the κ = 1/4 crossing
  double log10_n_star = 0.0;     // +inf when not representable in a double
};

CrossingReport schedule_crossing(CertFlavor flavor, int d);

/**
 * The four linearization-admissibility inequalities (both flavors), sides
 * reported in log scale to stay overflow-safe, plus the success-probability
 * floors 1 − exp(−√n) and 1 − c₂/√n. The constants c₁, c₂ are unknown in
 * the source analysis; they are inputs (default 1) and always reported.
 */
struct AdmissibilityReport {
  double n = 0.0;
  int d = 0, l = 0, m = 0;
  std::size_t s_size = 0;
  double c1 = 1.0, c2 = 1.0;
  double log_dim_lhs = 0.0;          // log(2 m l |S|^v l^{v-1})
  double log_eps_lhs_bundle = 0.0;   // log(2 c1 l² |S|^v l^{v-1})
  double log_eps_lhs_cover = 0.0;    // log(2 c2 l² |S|^v l^{v-1})
  double bundle_dim_rhs_log = 0.0;   // n^{1/(32d+160)}  (log of exp(...))
  double bundle_eps_rhs_log = 0.0;   // log n / (32d+160)
  double cover_dim_rhs_log = 0.0;    // sqrt(log n) log n
  double cover_eps_rhs_log = 0.0;    // (1/4) log log n
  bool bundle_dim_ok = false, bundle_eps_ok = false;
  bool cover_dim_ok = false, cover_eps_ok = false;
  double prob_floor_bundle = 0.0, prob_floor_cover = 0.0;
};

AdmissibilityReport admissibility(double n, int d, int l, std::size_t s_size, int m,
                                  double c1 = 1.0, double c2 = 1.0);

/// uniform net on [s_min, 1] with spacing ≤ 1/(5 s_size c3);
/// size = ceil((1-s_min)·5·s_size·c3) + 1
std::vector<double> epsilon_net(double s_min, std::size_t s_size, double c3);

struct Verdict {
  bool ok = false;
  double total = 0.0;
  double gap_lower_bound = 0.0;  // 1/4 - kappa, meaningful when ok
};

/// Neumann-series criterion: 1 + L invertible when ‖L^int‖ + ‖L^cusp‖ < 1.
Verdict neumann_verdict(double norm_int, double norm_cusp, double kappa);

struct ToyConfig {
  CertFlavor flavor = CertFlavor::bundle;
  int n = 8;
  double T = 0.5;
  double kappa = 0.2;
  double C_geo = 0.0;
  GridSpec grid;
  std::uint64_t seed = 1;
  std::size_t lattice_cap = 40;
  int n_cap = 64;
  std::size_t grid_cap = 1600;
  double c3_override = -1.0;  // fit from deviation pairs when negative
  double norm_tol = 1e-10;
  double hs_budget = 10.0;  // cap on every block's Hilbert-Schmidt norm
};

struct ToyStage {
  double s = 0.0;
  double norm_full = 0.0;
  double norm_trunc = 0.0;
  double svd_slack = 0.0;  // ‖assembled(full - trunc)‖
};

struct CertificateReport {
  ToyConfig config;
  int d = 0;
  std::size_t lattice_size = 0;
  double radius_bound = 0.0;
  double c3 = 0.0;
  double s_min = 0.0;
  std::vector<double> net;
  double net_spacing = 0.0;
  double lipschitz_budget = 0.0;  // |S| c3 spacing
  std::vector<ToyStage> stages;
  // singular-value spectra of the discretized blocks at the first net point
  std::vector<std::pair<std::string, std::vector<double>>> sv_spectra;
  AdmissibilityReport admissibility;  // evaluated at the toy's (n, l, |S|, m)
  double max_hs_norm = 0.0;
  double measured_norm_int = 0.0;
  double norm_cusp_measured = 0.0;   // (m2 + 2 m1) · 5/(4κ) from sampled sups
  double norm_cusp_bound = 0.125;    // the deterministic 1/8 cap
  double max_svd_residual = 0.0;     // max_γ s_{r+1}, target 1/(20|S|)
  double svd_residual_target = 0.0;
  double assembly_slack_max = 0.0;   // max_s ‖assembled(full-trunc)‖, cap 1/20
  bool verdict = false;              // measured_norm_int + the 1/8 cap < 1
  double gap_lower_bound = 0.0;

  nlohmann::json to_json() const;
  std::string to_text_table() const;
};

/**
 * The full desk-scale pipeline: lattice set → discretized a_γ → SVD
 * truncation at 1/(20|S(T)|) → hermitized assembly against a sampled
 * representation → sup of the norm over the ε-net → Neumann verdict.
 * Deterministic given the seed. At toy κ the verdict is normally false;
 * the contract is pipeline integrity, not a true verdict.
 */
CertificateReport end_to_end_toy(const SurfaceModel& model, const ToyConfig& config);

/// ‖Σ a_γ ⊗ ρ(γ)‖ via Hermitian Lanczos on the antidiagonal doubling
/// [[0,A],[A*,0]] (valid for any coefficient map; matches
/// spectral_norm(assemble(hermitize(cm), rep)) and stays matrix-free).
double hermitized_norm(const CoefficientMap& cm, const RepresentationSample& rep,
                       bool zero_mean = false, const NormOptions& opt = {});

}  // namespace specgap
