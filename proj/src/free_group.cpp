#include "specgap/free_group.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace specgap {

namespace {
void check_letter(int letter, int rank) {
  if (letter == 0 || std::abs(letter) > rank)
    throw std::invalid_argument("invalid letter " + std::to_string(letter) +
                                " for rank " + std::to_string(rank));
}
}  // namespace

ReducedWord ReducedWord::reduce(const std::vector<int>& letters, int rank) {
  ReducedWord w;
  w.letters_.reserve(letters.size());
  for (int letter : letters) {
    check_letter(letter, rank);
    if (!w.letters_.empty() && w.letters_.back() == -letter)
      w.letters_.pop_back();
    else
      w.letters_.push_back(letter);
  }
  return w;
}

ReducedWord ReducedWord::generator(int letter, int rank) {
  check_letter(letter, rank);
  ReducedWord w;
  w.letters_.push_back(letter);
  return w;
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    w.letters_.push_back(-*it);
  return w;
}

ReducedWord ReducedWord::prefix(std::size_t k) const {
  ReducedWord w;
  w.letters_.assign(letters_.begin(), letters_.begin() + std::min(k, letters_.size()));
  return w;
}

ReducedWord ReducedWord::suffix(std::size_t k) const {
  ReducedWord w;
  if (k < letters_.size())
    w.letters_.assign(letters_.begin() + k, letters_.end());
  return w;
}

std::string ReducedWord::str() const {
  if (letters_.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(letters_[i]);
  }
  return s;
}

ReducedWord mul(const ReducedWord& u, const ReducedWord& v) {
  // append v's letters onto u's with cancellation at the seam
  ReducedWord w = u;
  for (int letter : v.letters()) {
    if (!w.letters_.empty() && w.letters_.back() == -letter)
      w.letters_.pop_back();
    else
      w.letters_.push_back(letter);
  }
  return w;
}

int SupportSet::radius() const {
  int r = 0;
  for (const auto& w : elements) r = std::max<int>(r, static_cast<int>(w.length()));
  return r;
}

bool SupportSet::is_symmetric() const {
  for (const auto& w : elements)
    if (!contains(w.inverse())) return false;
  return true;
}

unsigned long long ball_size_closed_form(int d, int l) {
  if (d < 1 || l < 0) throw std::invalid_argument("ball_size: d >= 1, l >= 0");
  if (d == 1) return 2ULL * l + 1ULL;
  unsigned long long q = 2ULL * d - 1ULL, pw = 1ULL;
  for (int i = 0; i < l; ++i) pw *= q;
  return 1ULL + 2ULL * d * (pw - 1ULL) / (2ULL * d - 2ULL);
}

SupportSet ball(int d, int l, std::size_t budget) {
  if (d < 1) throw std::invalid_argument("ball: rank must be >= 1");
  if (l < 0) throw std::invalid_argument("ball: radius must be >= 0");
  SupportSet out;
  out.elements.insert(ReducedWord());
  std::vector<ReducedWord> frontier{ReducedWord()};
  for (int depth = 0; depth < l; ++depth) {
    std::vector<ReducedWord> next;
    next.reserve(frontier.size() * (2 * d - 1) + 1);
    for (const auto& w : frontier) {
      const int last = w.is_identity() ? 0 : w.letters().back();
      for (int g = 1; g <= d; ++g) {
        for (int sign : {+1, -1}) {
          const int letter = sign * g;
          if (letter == -last) continue;  // would cancel
          ReducedWord child = mul(w, ReducedWord::generator(letter, d));
          if (out.elements.size() + 1 > budget)
            throw BudgetExceeded("ball: element budget " + std::to_string(budget) +
                                 " exceeded at radius " + std::to_string(depth + 1));
          out.elements.insert(child);
          next.push_back(std::move(child));
        }
      }
    }
    frontier.swap(next);
  }
  return out;
}

SupportSet split_support(const SupportSet& S, int l) {
  if (S.radius() > l)
    throw std::invalid_argument("split_support: S not contained in B_l");
  if (l % 2 != 0) l += 1;  // pad odd l to the next even integer
  const std::size_t half = static_cast<std::size_t>(l) / 2;

  SupportSet s1;
  s1.elements.insert(ReducedWord());  // the unit is always an index
  for (const auto& w : S.elements) {
    if (w.length() <= half) {
      // short words pair with the identity
      s1.elements.insert(w);
      s1.elements.insert(w.inverse());
    } else {
      // w = p q cut at the midpoint, so w = (p^{-1})^{-1} q with both halves
      // in B_{l/2}; inserting all four inverses keeps S1 symmetric and
      // covers w^{-1} = q^{-1} p^{-1} by the mirrored cut
      const std::size_t cut = (w.length() + 1) / 2;
      ReducedWord p = w.prefix(cut);
      ReducedWord q = w.suffix(cut);
      s1.elements.insert(p);
      s1.elements.insert(p.inverse());
      s1.elements.insert(q);
      s1.elements.insert(q.inverse());
    }
  }
  return s1;
}

}  // namespace specgap
