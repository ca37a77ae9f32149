#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "specgap/free_group.hpp"

#include "json.hpp"

namespace specgap {

/// Element of PSL(2,R) stored as a unit-determinant 2x2 real matrix (sign
/// ambiguity harmless: the action is the quotient one).
struct Moebius {
  Eigen::Matrix2d mat = Eigen::Matrix2d::Identity();

  static Moebius identity() { return {}; }
  Moebius operator*(const Moebius& o) const { return {mat * o.mat}; }
  Moebius inverse() const;
  std::complex<double> apply(std::complex<double> z) const;
  double trace() const { return mat.trace(); }
};

/// cosh d(z,w) = 1 + |z-w|^2 / (2 Im z Im w); throws on non-positive
/// imaginary parts.
double cosh_hyp_distance(std::complex<double> z, std::complex<double> w);
double hyp_distance(std::complex<double> z, std::complex<double> w);

/**
 * Concrete Fuchsian model: free generators as Moebius matrices, a base
 * point, and the geometric constant feeding the cusp truncation L = C/κ.
 * The default is the once-punctured torus with γ₁ = [[1,1],[1,2]],
 * γ₂ = [[1,-1],[-1,2]], base point i; its commutator is parabolic (the
 * cusp) and freeness is probed numerically at load.
 */
struct SurfaceModel {
  int d = 0;
  std::vector<Moebius> generators;
  std::complex<double> base_point{0.0, 1.0};
  std::string name;
  double cusp_constant = 1.0;

  static SurfaceModel punctured_torus();
  static SurfaceModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Moebius word_to_moebius(const ReducedWord& w) const;
  double displacement(const ReducedWord& w) const;  // d(γ·base, base)
  double max_generator_displacement() const;

  /// freeness probe: no nonempty reduced word of length <= probe_length maps
  /// within 1e-6 of ±Id; also checks the parabolic commutator for d >= 2.
  void validate(int probe_length = 8) const;
};

struct LatticePoint {
  ReducedWord word;
  double displacement = 0.0;
};

/**
 * The support set S(T): all γ with d(γw, w) ≤ 2(C + log(1/κ) + T),
 * enumerated breadth-first over reduced words. Displacement is not monotone
 * along a word, so the frontier is pruned only past radius_bound +
 * prune_slack; slack sufficiency is validated by the doubling test.
 */
struct LatticePointSet {
  double T = 0.0, kappa = 0.0, radius_bound = 0.0, prune_slack = 0.0;
  std::vector<LatticePoint> elements;  // shortlex order, contains the unit

  std::size_t size() const { return elements.size(); }
  int max_word_length() const;
  bool contains(const ReducedWord& w) const;
};

LatticePointSet lattice_point_set(const SurfaceModel& model, double T, double kappa,
                                  double C_geo = 1.0, double prune_slack = -1.0,
                                  std::size_t budget = 20'000'000);

struct WordLengthReport {
  int max_wl = 0;
  std::size_t set_size = 0;
  bool max_wl_le_size = false;        // the proof's counting surrogate
  double env_statement_constant = 0;  // max_wl / (κ² e^{2T})
  double env_proof_constant = 0;      // max_wl / (e^{2T} / κ²)
};

WordLengthReport word_length_bound_check(const LatticePointSet& lps);

/// cusp truncation height L = C/κ and the diameter bound C + log(1/κ)
double cusp_region_height(double kappa, double C = 1.0);
double diam_K_bound(double kappa, double C = 1.0);

}  // namespace specgap
