#pragma once

#include "specgap/operator_lab.hpp"

namespace specgap {

/**
 * One half-degree linearization step. From a hermitian coefficient map with
 * support S ⊆ B_l it produces coefficients b_g over the split support S₁
 * (symmetric, unit included) with
 *
 *   ‖Σ b_g ⊗ ρ(g)‖² − θ = ‖Σ a_γ ⊗ ρ(γ)‖
 *
 * for every unitary representation ρ, where θ = |S₁|·‖ã‖ and ã is the
 * multiplicity-normalized block matrix ã_{g,h} = a_{g⁻¹h}/#pairs. The
 * tensor layout puts the S₁ index outermost: coefficient row = s1_index·m +
 * inner index.
 */
struct HalfStep {
  CoefficientMap input;   // hermitian, support ⊆ B_l
  CoefficientMap output;  // g ↦ b_g, dimension m·|S₁|
  SupportSet s1;          // split support, unit included
  int l_padded = 0;
  double a_tilde_norm = 0.0;
  double theta = 0.0;  // |S₁| · ‖ã‖ (the exact diagonal sum, not the stated bound)
  std::map<ReducedWord, int> multiplicity;  // product word → pair count over S₁×S₁
  Eigen::MatrixXcd a_tilde;  // exposed for audit
  Eigen::MatrixXcd b_tilde;  // self-adjoint PSD square root of ã + ‖ã‖·Id
};

HalfStep half_step(const CoefficientMap& cm, int l);

/// |(‖Q_ρ‖² − θ) − ‖P_ρ‖| for the two assemblies of a half step.
double verify_step(const HalfStep& hs, const RepresentationSample& rep,
                   bool zero_mean = false, const NormOptions& opt = {});

struct ChainLevel {
  int l_in = 0;              // padded support radius entering the step
  std::size_t s_size = 0;    // |S_k| without the unit
  std::size_t s_size_e = 0;  // |S_k| with the unit
  Eigen::Index n_k = 0;      // cumulative dimension factor after the step
  double theta = 0.0;
  double a_tilde_norm = 0.0;
};

/**
 * Iterated chain down to a linear polynomial (support ⊆ B₁). Each level
 * hermitizes its input (the b-maps of the previous level are not hermitian)
 * and halves the padded support radius; v = ⌈log₂ l⌉ steps. The dimension
 * ledger records the actual n_k alongside the closed-form bound
 * 2l|S|^v l^{v−1} and the unit-index-adjusted variant.
 */
struct LinearizationChain {
  CoefficientMap final_map;        // empty in ledger-only mode
  std::vector<HalfStep> steps;     // empty in ledger-only mode
  std::vector<ChainLevel> levels;
  int v = 0;
  int final_radius = 0;
  Eigen::Index n_v = 0;            // actual factor (unit counted)
  double n_v_unit_free = 0.0;   // ∏ 2|S_k| with the unit not counted
  double closed_form_bound = 0.0;        // 2 l |S|^v l^{v-1}
  double adjusted_bound = 0.0;     // closed_form_bound · ∏ (|S_k|+1)/|S_k|

  nlohmann::json ledger_json() const;
};

/// ledger_only skips all matrix work (no ã, θ, b_g) and tracks only the
/// support/dimension bookkeeping; the support recursion is identical.
LinearizationChain build_chain(const CoefficientMap& cm, int l, Eigen::Index dim_cap = 20000,
                               bool ledger_only = false);

/**
 * Lemma 3.5 ε-propagation. Returns both the exact product ε·∏ 4·4^i|S| and
 * the closed form 2εl²|S|^v l^{v−1}; the two genuinely disagree for small v
 * (the closed form undercounts), so admissibility decisions use the exact
 * product and the closed form is reported for comparison.
 */
struct EpsilonPropagation {
  int v = 0;
  double exact = 0.0;
  double closed_form = 0.0;
  bool admissible_exact = false;   // exact < 1
  bool admissible_closed = false;  // closed form < 1
};

EpsilonPropagation propagate_epsilon(double eps, int l, std::size_t s_size);

}  // namespace specgap
