#include "doctest.h"

#include <map>

#include "specgap/operator_lab.hpp"

using namespace specgap;
using cplx = std::complex<double>;

namespace {

CoefficientMap generator_sum(int d) {
  CoefficientMap cm;
  cm.m = 1;
  for (int g = 1; g <= d; ++g) {
    cm.entries[ReducedWord::generator(g, d)] = Eigen::MatrixXcd::Ones(1, 1);
    cm.entries[ReducedWord::generator(-g, d)] = Eigen::MatrixXcd::Ones(1, 1);
  }
  return cm;
}

CoefficientMap random_cm(int m, int d, int max_len, int n_entries, SplitMix64& rng) {
  CoefficientMap cm;
  cm.m = m;
  while (static_cast<int>(cm.entries.size()) < n_entries) {
    std::vector<int> letters;
    const auto len = rng.next_below(static_cast<std::uint64_t>(max_len) + 1);
    for (std::size_t i = 0; i < len; ++i) {
      const int g = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d)));
      letters.push_back(rng.next_below(2) ? g : -g);
    }
    Eigen::MatrixXcd a(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) a(r, c) = {rng.next_normal(), rng.next_normal()};
    cm.entries[ReducedWord::reduce(letters, d)] = a;
  }
  return cm;
}

// oracle: dense compression of Σ a_γ ⊗ λ(γ) on ℓ²(B_R) built from explicit
// word enumeration (independent of the TreeBall index arithmetic)
double regular_norm_dense_oracle(const CoefficientMap& cm, int R, int d) {
  const SupportSet b = ball(d, R);
  std::map<ReducedWord, Eigen::Index> index;
  Eigen::Index next = 0;
  for (const auto& w : b.elements) index[w] = next++;
  const Eigen::Index m = cm.m;
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(next * m, next * m);
  for (const auto& [gamma, a] : cm.entries) {
    const ReducedWord gi = gamma.inverse();
    for (const auto& [w, wi] : index) {
      const ReducedWord target = mul(w, gi);
      const auto it = index.find(target);
      if (it == index.end()) continue;
      big.block(it->second * m, wi * m, m, m) += a;
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(big);
  return svd.singularValues()[0];
}

}  // namespace

TEST_CASE("hermitize: norm preserved and structure correct") {
  SplitMix64 rng(5);

  SUBCASE("scalar unit map") {
    CoefficientMap cm;
    cm.m = 1;
    cm.entries[ReducedWord()] = Eigen::MatrixXcd::Ones(1, 1);
    const CoefficientMap h = hermitize(cm);
    CHECK(h.m == 2);
    CHECK(h.is_hermitian());
    const auto rep = sample(Flavor::unitary, 4, 2, 1);
    CHECK(spectral_norm(assemble(h, rep).dense) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("single generator") {
    CoefficientMap cm;
    cm.m = 1;
    cm.entries[ReducedWord::generator(1, 2)] = Eigen::MatrixXcd::Ones(1, 1);
    const CoefficientMap h = hermitize(cm);
    const auto rep = sample(Flavor::unitary, 5, 2, 2);
    CHECK(spectral_norm(assemble(h, rep).dense) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("already-hermitian map keeps its assembled norm") {
    for (int trial = 0; trial < 5; ++trial) {
      const CoefficientMap cm = hermitize(random_cm(2, 2, 2, 3, rng));
      REQUIRE(cm.is_hermitian());
      const auto rep = sample(Flavor::unitary, 5, 2, rng.next_u64());
      const double direct = spectral_norm(assemble(cm, rep).dense);
      const double doubled = spectral_norm(assemble(hermitize(cm), rep).dense);
      CHECK(doubled == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("assemble: identity map, row sums, self-adjointness") {
  SUBCASE("unit coefficient gives the identity") {
    CoefficientMap cm;
    cm.m = 2;
    cm.entries[ReducedWord()] = Eigen::MatrixXcd::Identity(2, 2);
    const auto rep = sample(Flavor::permutation, 6, 2, 4);
    const AssembledOperator op = assemble(cm, rep);
    CHECK((op.dense - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(spectral_norm(op) == doctest::Approx(1.0));
  }

  SUBCASE("generator sum on the full permutation space has norm exactly 2d") {
    const CoefficientMap cm = generator_sum(2);
    const auto rep = sample(Flavor::permutation, 30, 2, 5);
    CHECK(spectral_norm(assemble(cm, rep)) == doctest::Approx(4.0).epsilon(1e-9));
  }

  SUBCASE("hermitian cm and unitary rep give a self-adjoint assembly") {
    SplitMix64 rng(6);
    const CoefficientMap cm = hermitize(random_cm(2, 2, 2, 3, rng));
    const auto rep = sample(Flavor::unitary, 4, 2, 6);
    const AssembledOperator op = assemble(cm, rep);
    CHECK(op.hermitian);
    CHECK((op.dense - op.dense.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("zero-mean compression shows Friedman-type behavior at n=400") {
    const CoefficientMap cm = generator_sum(2);
    const double kesten = 2.0 * std::sqrt(3.0);
    int good = 0;
    for (int seed = 0; seed < 20; ++seed) {
      const auto rep = sample(Flavor::permutation, 400, 2, SplitMix64::derive(40, seed));
      const double norm = spectral_norm(assemble(cm, rep, /*zero_mean=*/true));
      if (norm < 4.0 && norm >= kesten - 0.3) ++good;
    }
    CHECK(good >= 18);
  }

  SUBCASE("shape errors") {
    CoefficientMap cm;
    cm.m = 2;
    cm.entries[ReducedWord()] = Eigen::MatrixXcd::Identity(3, 3);
    const auto rep = sample(Flavor::unitary, 4, 2, 7);
    CHECK_THROWS_AS(assemble(cm, rep), std::invalid_argument);
    CoefficientMap cm2 = generator_sum(3);
    const auto rep2 = sample(Flavor::unitary, 4, 2, 8);
    CHECK_THROWS_AS(assemble(cm2, rep2), std::invalid_argument);
  }
}

TEST_CASE("spectral_norm: examples and Lanczos path against dense oracle") {
  SUBCASE("diagonal example") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = -3.0;
    d(2, 2) = 2.0;
    CHECK(spectral_norm(d) == doctest::Approx(3.0));
  }

  SUBCASE("random Hermitian: matrix-free Lanczos matches the dense eigensolver") {
    SplitMix64 rng(77);
    Eigen::MatrixXcd a(50, 50);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) a(i, j) = {rng.next_normal(), rng.next_normal()};
    a = (a + a.adjoint()).eval();
    const double dense = spectral_norm(a);

    AssembledOperator op;
    op.dim = 50;
    op.hermitian = true;
    op.apply = [&a](const cplx* x, cplx* y) {
      Eigen::Map<const Eigen::VectorXcd> xv(x, 50);
      Eigen::Map<Eigen::VectorXcd> yv(y, 50);
      yv = a * xv;
    };
    NormOptions opt;
    opt.tol = 1e-11;
    CHECK(lanczos_extremal<cplx>([&](const cplx* x, cplx* y) { op.apply(x, y); }, 50, opt) ==
          doctest::Approx(dense).epsilon(1e-8));
  }

  SUBCASE("identity of size 1000 at loose and tight tolerance") {
    AssembledOperator op;
    op.dim = 1000;
    op.hermitian = true;
    op.apply = [](const cplx* x, cplx* y) { std::copy(x, x + 1000, y); };
    for (double tol : {1e-3, 1e-12}) {
      NormOptions opt;
      opt.tol = tol;
      CHECK(spectral_norm(op, opt) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("matrix-free non-Hermitian assembly matches the dense SVD") {
    SplitMix64 rng(87);
    const CoefficientMap cm = random_cm(2, 2, 2, 3, rng);  // generically non-hermitian
    REQUIRE_FALSE(cm.is_hermitian());
    const auto rep = sample(Flavor::unitary, 5, 2, 88);
    const double dense = spectral_norm(assemble(cm, rep).dense);
    const AssembledOperator free_op = assemble(cm, rep, false, /*dense_cap=*/0);
    REQUIRE_FALSE(free_op.is_dense());
    NormOptions opt;
    opt.tol = 1e-11;
    CHECK(spectral_norm(free_op, opt) == doctest::Approx(dense).epsilon(1e-8));
  }

  SUBCASE("iteration cap raises a convergence error carrying the bracket") {
    SplitMix64 rng(91);
    Eigen::MatrixXcd a(60, 60);
    for (int i = 0; i < 60; ++i)
      for (int j = 0; j < 60; ++j) a(i, j) = {rng.next_normal(), rng.next_normal()};
    a = (a + a.adjoint()).eval();
    NormOptions opt;
    opt.max_iter = 2;
    opt.tol = 1e-14;
    bool threw = false;
    try {
      lanczos_extremal<cplx>(
          [&a](const cplx* x, cplx* y) {
            Eigen::Map<const Eigen::VectorXcd> xv(x, 60);
            Eigen::Map<Eigen::VectorXcd> yv(y, 60);
            yv = a * xv;
          },
          60, opt);
    } catch (const ConvergenceError& e) {
      threw = true;
      CHECK(e.bracket_lower > 0.0);
      CHECK(e.bracket_upper >= e.bracket_lower);
    }
    CHECK(threw);
  }

  SUBCASE("symmetric-spectrum operator (the power-iteration failure mode)") {
    // [[0, 1], [1, 0]] ⊗ I: eigenvalues ±1, degenerate extremes
    const int half = 40;
    AssembledOperator op;
    op.dim = 2 * half;
    op.hermitian = true;
    op.apply = [half](const cplx* x, cplx* y) {
      std::copy(x + half, x + 2 * half, y);
      std::copy(x, x + half, y + half);
    };
    CHECK(spectral_norm(op) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("TreeBall: arithmetic indexing is consistent with word arithmetic") {
  const TreeBall ball4(2, 4);
  CHECK(ball4.size() == ball_size_closed_form(2, 4));

  SplitMix64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> letters;
    for (int i = 0; i < 4; ++i) {
      const int g = 1 + static_cast<int>(rng.next_below(2));
      letters.push_back(rng.next_below(2) ? g : -g);
    }
    const ReducedWord w = ReducedWord::reduce(letters, 2);
    const std::size_t idx = ball4.apply_word(0, w);
    REQUIRE(idx != TreeBall::npos);
    CHECK(ball4.apply_word(idx, w.inverse()) == 0);
  }

  // all ball words map to distinct indices
  const SupportSet b3 = ball(2, 3);
  std::set<std::size_t> seen;
  for (const auto& w : b3.elements) {
    const std::size_t idx = TreeBall(2, 3).apply_word(0, w);
    REQUIRE(idx != TreeBall::npos);
    seen.insert(idx);
  }
  CHECK(seen.size() == b3.size());

  CHECK_THROWS_AS(TreeBall(2, 20, 1000), BudgetExceeded);
}

TEST_CASE("regular_norm_lower: examples, oracle, monotonicity") {
  SplitMix64 rng(21);

  SUBCASE("unit-supported map gives the block norm at any radius") {
    CoefficientMap cm;
    cm.m = 2;
    Eigen::MatrixXcd a(2, 2);
    a << cplx(1, 0), cplx(0, 2), cplx(0, 0), cplx(-1, 0);
    cm.entries[ReducedWord()] = a;
    const double na = spectral_norm(a);
    for (int R : {0, 2, 5}) CHECK(regular_norm_lower(cm, R) == doctest::Approx(na).epsilon(1e-9));
  }

  SUBCASE("single non-identity key attains its block norm once R covers it") {
    CoefficientMap cm;
    cm.m = 1;
    cm.entries[ReducedWord::reduce({1, 2}, 2)] = Eigen::MatrixXcd::Ones(1, 1) * cplx(0.0, 2.5);
    const int R = 4;  // wl + 2
    CHECK(regular_norm_lower(cm, R) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(regular_norm_lower(cm, R) ==
          doctest::Approx(regular_norm_dense_oracle(cm, R, 2)).epsilon(1e-9));
  }

  SUBCASE("random maps agree with the dense enumeration oracle") {
    for (int trial = 0; trial < 5; ++trial) {
      const CoefficientMap cm = random_cm(2, 2, 2, 3, rng);
      const double fast = regular_norm_lower(cm, 4);
      const double oracle = regular_norm_dense_oracle(cm, 4, 2);
      CHECK(fast == doctest::Approx(oracle).epsilon(1e-8));
    }
  }

  SUBCASE("non-decreasing in R and below the triangle bound") {
    for (int trial = 0; trial < 3; ++trial) {
      const CoefficientMap cm = random_cm(1, 2, 2, 3, rng);
      double prev = 0.0;
      for (int R = 2; R <= 10; ++R) {
        const double v = regular_norm_lower(cm, R);
        CHECK(v >= prev - 1e-9);
        CHECK(v <= triangle_upper(cm) + 1e-8);
        prev = v;
      }
    }
  }

  SUBCASE("generator sum approaches the Kesten value from below") {
    const CoefficientMap cm = generator_sum(2);
    const double kesten = 2.0 * std::sqrt(3.0);
    const double v8 = regular_norm_lower(cm, 8);
    CHECK(v8 <= kesten + 1e-9);
    CHECK(v8 >= 3.3);
    CHECK_THROWS_AS(regular_norm_lower(cm, 0), std::invalid_argument);
    CHECK_THROWS_AS(regular_norm_lower(cm, 12, NormOptions{}, /*ball_budget=*/1000),
                    BudgetExceeded);
  }
}

TEST_CASE("triangle_upper: examples") {
  CoefficientMap cm;
  cm.m = 1;
  cm.entries[ReducedWord()] = Eigen::MatrixXcd::Identity(1, 1);
  CHECK(triangle_upper(cm) == doctest::Approx(1.0));
  CHECK(triangle_upper(generator_sum(2)) == doctest::Approx(4.0));
}

TEST_CASE("CoefficientMap JSON round trip") {
  SplitMix64 rng(33);
  const CoefficientMap cm = random_cm(2, 2, 2, 3, rng);
  const CoefficientMap back = CoefficientMap::from_json(cm.to_json());
  CHECK(back.m == cm.m);
  REQUIRE(back.entries.size() == cm.entries.size());
  for (const auto& [w, a] : cm.entries)
    CHECK((back.entries.at(w) - a).cwiseAbs().maxCoeff() == 0.0);
}
