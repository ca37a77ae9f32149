#include "doctest.h"

#include <vector>

#include "specgap/free_group.hpp"
#include "specgap/rng.hpp"

using namespace specgap;

namespace {

// oracle: repeated single-pass adjacent-pair cancellation until fixpoint
std::vector<int> reduce_oracle(std::vector<int> letters) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
      if (letters[i] == -letters[i + 1]) {
        letters.erase(letters.begin() + static_cast<long>(i), letters.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return letters;
}

std::vector<int> random_letters(std::size_t len, int d, SplitMix64& rng) {
  std::vector<int> v;
  for (std::size_t i = 0; i < len; ++i) {
    const int g = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d)));
    v.push_back(rng.next_below(2) ? g : -g);
  }
  return v;
}

// oracle: count reduced sequences of length exactly k by filtering all raw sequences
unsigned long long count_reduced_exhaustive(int d, int k) {
  if (k == 0) return 1;
  const int alphabet = 2 * d;
  unsigned long long total = 1, count = 0;
  for (int i = 0; i < k; ++i) total *= static_cast<unsigned long long>(alphabet);
  for (unsigned long long code = 0; code < total; ++code) {
    unsigned long long c = code;
    int prev = 0;
    bool reduced = true;
    for (int i = 0; i < k; ++i) {
      const int idx = static_cast<int>(c % static_cast<unsigned long long>(alphabet));
      c /= static_cast<unsigned long long>(alphabet);
      const int letter = (idx % 2 == 0) ? idx / 2 + 1 : -(idx / 2 + 1);
      if (letter == -prev) {
        reduced = false;
        break;
      }
      prev = letter;
    }
    if (reduced) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("reduce: cancellation examples") {
  CHECK(ReducedWord::reduce({+1, -1}, 2).is_identity());
  const ReducedWord w = ReducedWord::reduce({+1, +2, -2, +1}, 2);
  CHECK(w.letters() == std::vector<int>{1, 1});
  CHECK_THROWS_AS(ReducedWord::reduce({0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(ReducedWord::reduce({3}, 2), std::invalid_argument);
}

TEST_CASE("reduce: idempotent on 200 random length-10 sequences") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto letters = random_letters(10, 2, rng);
    const ReducedWord once = ReducedWord::reduce(letters, 2);
    const ReducedWord twice = ReducedWord::reduce(once.letters(), 2);
    CHECK(once == twice);
    CHECK(once.letters() == reduce_oracle(letters));
  }
}

TEST_CASE("group laws on random words") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const ReducedWord u = ReducedWord::reduce(random_letters(rng.next_below(9), 2, rng), 2);
    const ReducedWord v = ReducedWord::reduce(random_letters(rng.next_below(9), 2, rng), 2);
    CHECK(mul(u, inv(u)).is_identity());
    CHECK(inv(inv(u)) == u);
    CHECK(word_length(mul(u, v)) <= u.length() + v.length());
    // associativity through a third word
    const ReducedWord w = ReducedWord::reduce(random_letters(5, 2, rng), 2);
    CHECK(mul(mul(u, v), w) == mul(u, mul(v, w)));
  }
}

TEST_CASE("ball: sizes against exhaustive enumeration and the closed form") {
  CHECK(ball(2, 0).size() == 1);
  CHECK(ball(2, 1).size() == 5);
  CHECK(ball(2, 2).size() == 17);  // 1 + 4 + 12

  for (int d : {2, 3}) {
    for (int l = 0; l <= (d == 2 ? 5 : 4); ++l) {
      unsigned long long total = 0;
      for (int k = 0; k <= l; ++k) total += count_reduced_exhaustive(d, k);
      CHECK(ball(d, l).size() == total);
      CHECK(ball_size_closed_form(d, l) == total);
    }
  }
  for (int d : {2, 3})
    for (int l = 0; l <= 6; ++l) CHECK(ball(d, l).size() == ball_size_closed_form(d, l));
}

TEST_CASE("ball: element budget error") {
  CHECK_THROWS_AS(ball(2, 10, 100), BudgetExceeded);
}

TEST_CASE("split_support: worked examples") {
  const int d = 2;
  SupportSet unit_only;
  unit_only.elements.insert(ReducedWord());
  const SupportSet s0 = split_support(unit_only, 2);
  CHECK(s0.size() == 1);
  CHECK(s0.contains(ReducedWord()));

  SupportSet s;
  s.elements.insert(ReducedWord::reduce({1, 2}, d));
  const SupportSet s1 = split_support(s, 2);
  CHECK(s1.size() <= 4 * s.size() + 1);
  CHECK(s1.contains(ReducedWord()));
  CHECK(s1.is_symmetric());
  CHECK(s1.radius() <= 1);

  SupportSet pair;
  pair.elements.insert(ReducedWord::generator(1, d));
  pair.elements.insert(ReducedWord::generator(-1, d));
  const SupportSet s2 = split_support(pair, 2);
  CHECK(s2.size() == 3);  // {e, g1, g1^{-1}}: short words pair with the unit
  CHECK(s2.contains(ReducedWord()));
}

TEST_CASE("split_support: postconditions exhaustively over S ⊆ B_2, |S| ≤ 3") {
  const SupportSet b2 = ball(2, 2);
  const std::vector<ReducedWord> words(b2.elements.begin(), b2.elements.end());
  const std::size_t n = words.size();

  auto check_subset = [&](const std::vector<std::size_t>& picks) {
    SupportSet s;
    for (auto i : picks) s.elements.insert(words[i]);
    const SupportSet s1 = split_support(s, 2);
    CHECK(s1.is_symmetric());
    CHECK(s1.contains(ReducedWord()));
    CHECK(s1.radius() <= 1);
    CHECK(s1.size() <= 4 * s.size() + 1);
    // oracle: exhaustive pairing g^{-1} h over S1 x S1
    for (const auto& w : s.elements) {
      bool covered = false;
      for (const auto& g : s1.elements) {
        for (const auto& h : s1.elements) {
          if (mul(g.inverse(), h) == w) {
            covered = true;
            break;
          }
        }
        if (covered) break;
      }
      CHECK(covered);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    check_subset({i});
    for (std::size_t j = i + 1; j < n; ++j) {
      check_subset({i, j});
      for (std::size_t k = j + 1; k < n; ++k) check_subset({i, j, k});
    }
  }
}

TEST_CASE("split_support: odd radius pads to the next even integer") {
  SupportSet s;
  s.elements.insert(ReducedWord::reduce({1, 2, 1}, 2));
  s.elements.insert(ReducedWord::reduce({-1, -2, -1}, 2));
  const SupportSet s1 = split_support(s, 3);
  CHECK(s1.radius() <= 2);  // B_{4/2}
  for (const auto& w : s.elements) {
    bool covered = false;
    for (const auto& g : s1.elements)
      for (const auto& h : s1.elements)
        if (mul(g.inverse(), h) == w) covered = true;
    CHECK(covered);
  }
}
