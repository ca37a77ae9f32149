#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "specgap/free_group.hpp"
#include "specgap/rng.hpp"

#include "json.hpp"

namespace specgap {

enum class Flavor { permutation, unitary };

const char* flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& name);

/**
 * Images of the d generators under a sampled homomorphism. Permutation
 * flavor stores the permutations as index arrays (sigma[k] = image of k);
 * unitary flavor stores dense Haar matrices. Deterministic given the seed.
 */
struct RepresentationSample {
  Flavor flavor = Flavor::permutation;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> perms;          // permutation flavor
  std::vector<Eigen::MatrixXcd> unitaries;      // unitary flavor

  /// generator image for a signed letter in {±1,...,±d}
  Eigen::MatrixXcd image(int letter) const;

  nlohmann::json to_json() const;
  static RepresentationSample from_json(const nlohmann::json& j);
};

/// Uniform S_n (Fisher-Yates) or Haar U(n) (QR of complex Ginibre with the
/// R-diagonal phase normalization), one independent stream per generator.
RepresentationSample sample(Flavor flavor, int n, int d, std::uint64_t seed);

/// Ordered product of generator images along the word.
Eigen::MatrixXcd evaluate(const RepresentationSample& rep, const ReducedWord& w);

/// P = Id - (1/n) * ones: the orthogonal projector onto zero-mean vectors.
Eigen::MatrixXd zero_mean_projector(int n);

/// P * evaluate(w) * P, the compression to V_n^0 (permutation flavor only).
Eigen::MatrixXcd restrict_zero_mean(const RepresentationSample& rep, const ReducedWord& w);

/// True iff the subgroup generated by the permutation images acts
/// transitively on [n] (union-find over generator orbits).
bool is_transitive(const RepresentationSample& rep);

/// Standalone samplers (used by `sample` and directly in experiments).
std::vector<int> uniform_permutation(int n, SplitMix64& rng);
Eigen::MatrixXcd haar_unitary(int n, SplitMix64& rng);

}  // namespace specgap
