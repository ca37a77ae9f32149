#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>

#include "specgap/free_group.hpp"
#include "specgap/lanczos.hpp"
#include "specgap/representations.hpp"

#include "json.hpp"

namespace specgap {

/**
 * Finitely supported map γ ↦ a_γ into m×m complex matrices: the coefficient
 * data of the noncommutative polynomial Σ a_γ ⊗ ρ(γ). Keys are reduced
 * words; iteration order is shortlex (deterministic).
 */
struct CoefficientMap {
  int m = 1;
  std::map<ReducedWord, Eigen::MatrixXcd> entries;

  SupportSet support() const;
  int radius() const;

  /// a_γ = (a_{γ^{-1}})* for every key, absentees counted as zero
  bool is_hermitian(double tol = 1e-12) const;

  nlohmann::json to_json() const;
  static CoefficientMap from_json(const nlohmann::json& j);
};

/// Antidiagonal doubling b_γ = [[0, a_γ], [(a_{γ^{-1}})*, 0]] over the
/// symmetric closure of the support. The assembled operator becomes
/// [[0, P], [P*, 0]], self-adjoint with spectrum ±σ(P), so its norm equals
/// ‖P‖ for every unitary representation.
CoefficientMap hermitize(const CoefficientMap& cm);

/// Σ_γ ‖a_γ‖ — the triangle-inequality upper bound.
double triangle_upper(const CoefficientMap& cm);

/**
 * Σ a_γ ⊗ ρ(γ), dense up to a size cap, matrix-free beyond it. Row index is
 * i_coeff * n + i_rep. With zero_mean, each ρ(γ) is compressed by the
 * zero-mean projector (permutation flavor only).
 */
struct AssembledOperator {
  Eigen::Index dim = 0;
  bool hermitian = false;
  Eigen::MatrixXcd dense;  // empty when matrix-free
  std::function<void(const std::complex<double>*, std::complex<double>*)> apply;
  std::function<void(const std::complex<double>*, std::complex<double>*)> apply_adjoint;
  bool is_dense() const { return dense.size() > 0; }
};

AssembledOperator assemble(const CoefficientMap& cm, const RepresentationSample& rep,
                           bool zero_mean = false, Eigen::Index dense_cap = 4000);

/// Operator norm within relative tolerance opt.tol. Dense Hermitian inputs
/// go through the eigensolver; dense general through SVD; matrix-free
/// through Lanczos (directly when Hermitian, on A*A otherwise).
double spectral_norm(const AssembledOperator& op, const NormOptions& opt = {});
double spectral_norm(const Eigen::MatrixXcd& a, const NormOptions& opt = {});

/**
 * Norm of the compression of Σ a_γ ⊗ λ(γ) (right regular representation) to
 * C^m ⊗ ℓ²(B_R). A certified lower bound of the ℓ²(Γ) norm, non-decreasing
 * in R. The ball is indexed arithmetically (no word storage), so R = 14 at
 * d = 2 (~10^7 nodes) stays affordable.
 */
double regular_norm_lower(const CoefficientMap& cm, int R, const NormOptions& opt = {},
                          std::size_t ball_budget = 20'000'000);

/**
 * Arithmetic index model of the radius-R ball of the free-group Cayley
 * graph: depth blocks laid out breadth-first, parent/child positions
 * computed from index arithmetic, one byte of last-letter state per node.
 */
class TreeBall {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  TreeBall(int d, int R, std::size_t budget = 20'000'000);

  std::size_t size() const { return last_.size(); }
  int radius() const { return R_; }

  /// index of (word at idx) * letter, npos if the product leaves the ball
  std::size_t step(std::size_t idx, int letter) const;
  /// right multiplication by a full word
  std::size_t apply_word(std::size_t idx, const ReducedWord& w) const;

 private:
  int d_, R_;
  std::vector<std::uint8_t> last_;   // letter code of the final letter, 0xFF at the root
  std::vector<std::uint8_t> depth_;
  std::vector<std::size_t> offset_;  // offset_[k] = first index at depth k
};

}  // namespace specgap
