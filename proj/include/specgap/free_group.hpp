#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "specgap/errors.hpp"

namespace specgap {

/**
 * Reduced word in the free group on d generators. Letters are signed
 * generator indices in {±1,...,±d}; the empty sequence is the unit. The
 * stored sequence is always reduced (no adjacent mutually-inverse letters),
 * so equality of group elements is equality of sequences. Immutable after
 * construction.
 */
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Reduce an arbitrary letter sequence. Throws std::invalid_argument on a
  /// zero letter or |letter| > rank.
  static ReducedWord reduce(const std::vector<int>& letters, int rank);

  /// Single validated letter.
  static ReducedWord generator(int letter, int rank);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  ReducedWord inverse() const;

  /// Prefix of the first k letters (already reduced).
  ReducedWord prefix(std::size_t k) const;
  /// Suffix starting at letter k.
  ReducedWord suffix(std::size_t k) const;

  /// Shortlex order: by length, then lexicographic. Gives deterministic
  /// iteration everywhere a word is a map key.
  friend std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b) {
    if (a.letters_.size() != b.letters_.size())
      return a.letters_.size() <=> b.letters_.size();
    for (std::size_t i = 0; i < a.letters_.size(); ++i)
      if (a.letters_[i] != b.letters_[i]) return a.letters_[i] <=> b.letters_[i];
    return std::strong_ordering::equal;
  }
  friend bool operator==(const ReducedWord& a, const ReducedWord& b) = default;

  std::string str() const;  // "e" or e.g. "1.-2.1"

 private:
  friend ReducedWord mul(const ReducedWord& u, const ReducedWord& v);
  std::vector<int> letters_;
};

ReducedWord mul(const ReducedWord& u, const ReducedWord& v);
inline ReducedWord inv(const ReducedWord& w) { return w.inverse(); }
inline std::size_t word_length(const ReducedWord& w) { return w.length(); }

/**
 * Finite set of reduced words. radius() is the smallest l with the set
 * contained in the ball B_l, i.e. the max word length.
 */
struct SupportSet {
  std::set<ReducedWord> elements;

  int radius() const;
  bool is_symmetric() const;
  bool contains(const ReducedWord& w) const { return elements.count(w) > 0; }
  std::size_t size() const { return elements.size(); }
};

/// Exact count of the ball B_l in F_d: 1 + 2d((2d-1)^l - 1)/(2d-2) for d >= 2.
unsigned long long ball_size_closed_form(int d, int l);

/// All reduced words of length <= l, by breadth-first extension with
/// non-cancelling letters. Throws BudgetExceeded past the element budget.
SupportSet ball(int d, int l, std::size_t budget = 1'000'000);

/**
 * Half-degree support split: given S ⊆ B_l (l even after padding), returns
 * a symmetric S₁ ⊆ B_{l/2} containing the unit such that every w ∈ S is
 * g⁻¹h with g,h ∈ S₁, and |S₁| ≤ 4|S| + 1. Words of length ≤ l/2 pair with
 * the unit; longer words are cut at the midpoint, and the mirrored cut is
 * reused for the inverse word so a symmetric pair costs at most 4 elements.
 * Odd l is padded up to the next even integer.
 */
SupportSet split_support(const SupportSet& S, int l);

}  // namespace specgap
