#include "doctest.h"

#include <cmath>

#include "specgap/certificate.hpp"

using namespace specgap;
using cplx = std::complex<double>;

TEST_CASE("rate_schedule: formulas evaluated literally") {
  const RateSchedule rs = rate_schedule(CertFlavor::bundle, 1e6, 2);
  const double ln = std::log(1e6), ll = std::log(ln);
  CHECK(rs.kappa == doctest::Approx(64.0 * 224.0 * ll * ll / ln).epsilon(1e-14));
  CHECK(rs.kappa == doctest::Approx(7154.0).epsilon(0.01));  // vacuous at desk n, as expected
  CHECK(rs.gap_bound < 0.0);
  CHECK(rs.T == doctest::Approx(std::sqrt(ln) / (4.0 * std::sqrt(224.0))).epsilon(1e-14));

  const RateSchedule rc = rate_schedule(CertFlavor::cover, 1e12, 2);
  const double lll = std::log(std::log(std::log(1e12)));
  const double ll2 = std::log(std::log(1e12));
  CHECK(rc.kappa == doctest::Approx(4.0 * 576.0 * lll * lll / ll2).epsilon(1e-14));
  CHECK(rc.T == doctest::Approx(std::sqrt(ll2) / 24.0).epsilon(1e-14));

  CHECK_THROWS_AS(rate_schedule(CertFlavor::cover, 10.0, 2), std::domain_error);
}

TEST_CASE("gap identity 1/4 - kappa = s_min (1 - s_min) to machine precision") {
  SplitMix64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const double kappa = 0.25 * rng.next_double();
    const double s_min = 0.5 + std::sqrt(kappa);
    CHECK(std::abs((0.25 - kappa) - s_min * (1.0 - s_min)) <= 1e-12);
  }
}

TEST_CASE("schedules: eventually decreasing, crossings reported") {
  // bundle κ(10^k) strictly decreasing for k = 4..12 (past the turning point)
  double prev = rate_schedule(CertFlavor::bundle, 1e4, 2).kappa;
  for (int k = 5; k <= 12; ++k) {
    const double cur = rate_schedule(CertFlavor::bundle, std::pow(10.0, k), 2).kappa;
    CHECK(cur < prev);
    prev = cur;
  }

  const CrossingReport cb = schedule_crossing(CertFlavor::bundle, 2);
  CHECK(std::isfinite(cb.log10_n_star));
  CHECK(cb.log10_n_star > 1e6);  // astronomically large
  // at the crossing the gap bound is nonnegative
  const double y = cb.log10_n_star * std::log(10.0);
  const double ly = std::log(y);
  CHECK(64.0 * 224.0 * ly * ly / y == doctest::Approx(0.25).epsilon(1e-6));

  const CrossingReport cc = schedule_crossing(CertFlavor::cover, 2);
  CHECK(std::isinf(cc.log10_n_star));     // not representable
  CHECK(cc.loglog_n_star > 1e5);          // ln ln n* still is
  const double z = cc.loglog_n_star;
  CHECK(4.0 * 576.0 * std::log(z) * std::log(z) / z == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("admissibility: log-scale sides and worked cases") {
  SUBCASE("cover flavor fails at n=1e3 with l=4, |S|=5") {
    const AdmissibilityReport r = admissibility(1e3, 2, 4, 5, 2);
    CHECK(std::exp(r.cover_eps_rhs_log) == doctest::Approx(1.6215).epsilon(1e-3));
    CHECK(std::exp(r.log_eps_lhs_cover) == doctest::Approx(3200.0).epsilon(1e-12));
    CHECK_FALSE(r.cover_eps_ok);
  }

  SUBCASE("bundle conditions: true crossing near 10^310 for l=2, |S|=3, m=2") {
    // note: 2c1 l^2 |S| = 24 while n^{1/224} at n=10^100 is only ~2.8
    const AdmissibilityReport small = admissibility(1e100, 2, 2, 3, 2);
    CHECK_FALSE(small.bundle_eps_ok);
    CHECK_FALSE(small.bundle_dim_ok);
    const AdmissibilityReport big = admissibility(1e320, 2, 2, 3, 2);
    CHECK(big.bundle_eps_ok);
    CHECK(big.bundle_dim_ok);
  }

  SUBCASE("probability floors compare as expected at n=1e4") {
    const AdmissibilityReport r = admissibility(1e4, 2, 2, 3, 2);
    CHECK(r.prob_floor_bundle >= r.prob_floor_cover);
    CHECK(r.prob_floor_bundle <= 1.0);
    CHECK(r.prob_floor_cover == doctest::Approx(1.0 - 1.0 / 100.0));
  }

  CHECK_THROWS_AS(admissibility(0.5, 2, 2, 3, 2), std::invalid_argument);
}

TEST_CASE("epsilon_net") {
  SUBCASE("two points suffice for s_min=0.9, |S|=1, c3=1") {
    const auto net = epsilon_net(0.9, 1, 1.0);
    REQUIRE(net.size() == 2);
    CHECK(net.front() == doctest::Approx(0.9));
    CHECK(net.back() == doctest::Approx(1.0));
  }

  SUBCASE("spacing invariant on random inputs") {
    SplitMix64 rng(5);
    for (int t = 0; t < 50; ++t) {
      const double s_min = 0.5 + 0.45 * rng.next_double();
      const std::size_t s_size = 1 + rng.next_below(30);
      const double c3 = 0.1 + 4.0 * rng.next_double();
      const auto net = epsilon_net(s_min, s_size, c3);
      REQUIRE(net.size() >= 2);
      CHECK(net.front() == doctest::Approx(s_min));
      CHECK(net.back() == doctest::Approx(1.0));
      const double cap = 1.0 / (5.0 * double(s_size) * c3);
      const std::size_t expected =
          static_cast<std::size_t>(std::ceil((1.0 - s_min) * 5.0 * double(s_size) * c3)) + 1;
      CHECK(net.size() == std::max<std::size_t>(expected, 2));
      for (std::size_t i = 1; i < net.size(); ++i) CHECK(net[i] - net[i - 1] <= cap + 1e-12);
    }
  }

  SUBCASE("slack ledger: 2/5 + 1/5 = 3/5 and 3/5 + 1/8 <= 4/5 < 1") {
    CHECK(2.0 / 5.0 + 1.0 / 5.0 == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
    CHECK(3.0 / 5.0 + 1.0 / 8.0 <= 4.0 / 5.0);
    CHECK(4.0 / 5.0 < 1.0);
    // propagation: sup over the net <= 2/5 plus a Lipschitz budget <= 1/5
    // pushes the interval sup to <= 3/5
    const double net_sup = 0.4, lipschitz = 0.2;
    CHECK(net_sup + lipschitz <= 0.6 + 1e-15);
  }
}

TEST_CASE("neumann_verdict") {
  const Verdict a = neumann_verdict(0.6, 0.125, 0.01);
  CHECK(a.ok);
  CHECK(a.total == doctest::Approx(29.0 / 40.0));
  CHECK(a.total <= 0.8);
  CHECK(a.gap_lower_bound == doctest::Approx(0.24));

  CHECK_FALSE(neumann_verdict(0.95, 0.1, 0.01).ok);
  CHECK(neumann_verdict(0.0, 0.0, 0.01).ok);

  SUBCASE("monotone in the first argument") {
    SplitMix64 rng(9);
    for (int t = 0; t < 50; ++t) {
      const double b = rng.next_double();
      const double a1 = rng.next_double(), a2 = a1 * rng.next_double();
      if (neumann_verdict(a1, b, 0.1).ok) CHECK(neumann_verdict(a2, b, 0.1).ok);
    }
  }
  CHECK_THROWS_AS(neumann_verdict(-0.1, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("hermitized_norm equals the norm of the hermitized assembly") {
  SplitMix64 rng(13);
  for (int t = 0; t < 5; ++t) {
    CoefficientMap cm;
    cm.m = 2;
    for (int k = 0; k < 3; ++k) {
      std::vector<int> letters;
      const auto len = rng.next_below(3);
      for (std::size_t i = 0; i < len; ++i) {
        const int g = 1 + static_cast<int>(rng.next_below(2));
        letters.push_back(rng.next_below(2) ? g : -g);
      }
      Eigen::MatrixXcd a(2, 2);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) a(r, c) = {rng.next_normal(), rng.next_normal()};
      cm.entries[ReducedWord::reduce(letters, 2)] = a;
    }
    const auto rep = sample(Flavor::unitary, 4, 2, rng.next_u64());
    const double direct = spectral_norm(assemble(hermitize(cm), rep).dense);
    NormOptions opt;
    opt.tol = 1e-11;
    CHECK(hermitized_norm(cm, rep, false, opt) == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("end_to_end_toy") {
  const SurfaceModel model = SurfaceModel::punctured_torus();

  SUBCASE("single-element support: report matches the standalone a_e norm") {
    ToyConfig tc;
    tc.flavor = CertFlavor::bundle;
    tc.n = 4;
    tc.T = 0.3;
    tc.kappa = 0.8;
    tc.C_geo = 0.0;
    tc.grid.nx = 10;
    tc.grid.ny = 10;
    tc.seed = 3;
    const CertificateReport rep = end_to_end_toy(model, tc);
    REQUIRE(rep.lattice_size == 1);
    REQUIRE(rep.net.size() == 1);  // window empty at toy kappa: single point s=1

    const CutoffPair cutoffs = build_cutoffs(tc.kappa);
    const QuadratureGrid grid = make_grid(tc.grid, tc.T, cutoffs);
    const DiscretizedAGamma ag =
        discretize_a_gamma(model, ReducedWord(), rep.net[0], tc.T, cutoffs, grid);
    const double standalone = ag.singular_values.size() ? ag.singular_values[0] : 0.0;
    CHECK(std::abs(rep.stages[0].norm_full - standalone) <= 1e-8 * (1.0 + standalone));
    CHECK(rep.norm_cusp_measured <= 0.125 + 1e-12);
    // the verdict is the Neumann arithmetic against the deterministic 1/8
    // cusp cap (with the window degenerate at toy kappa, the gap statement
    // itself is vacuous)
    CHECK(rep.verdict == (rep.measured_norm_int + rep.norm_cusp_bound < 1.0));
    CHECK(rep.max_hs_norm <= tc.hs_budget);
    CHECK(rep.gap_lower_bound < 0.0);
  }

  SUBCASE("deterministic given the seed") {
    ToyConfig tc;
    tc.flavor = CertFlavor::cover;
    tc.n = 4;
    tc.T = 0.3;
    tc.kappa = 0.2;
    tc.C_geo = 0.0;
    tc.grid.nx = 8;
    tc.grid.ny = 8;
    tc.c3_override = 0.3;
    tc.seed = 17;
    const CertificateReport a = end_to_end_toy(model, tc);
    const CertificateReport b = end_to_end_toy(model, tc);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_text_table() == b.to_text_table());
  }

  SUBCASE("toy caps raise budget errors") {
    ToyConfig tc;
    tc.n = 100;
    CHECK_THROWS_AS(end_to_end_toy(model, tc), BudgetExceeded);
  }
}
