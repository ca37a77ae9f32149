#include "specgap/parametrix.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/SVD>
#include <cmath>

#include "specgap/errors.hpp"
#include "specgap/kernels.hpp"

namespace specgap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// quintic smoothstep and derivatives on [0,1]
double s5(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
double s5_d1(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
double s5_d2(double x) { return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x); }

// rising template: 0 below 1, 1 above tau0 = 1 + width; both derivative
// sups <= 1 for width = 2.5 (sup s5' = 1.875, sup |s5''| = 10/sqrt(3))
constexpr double kTemplateWidth = 2.5;

double rise(double u) {
  if (u <= 1.0) return 0.0;
  if (u >= 1.0 + kTemplateWidth) return 1.0;
  return s5((u - 1.0) / kTemplateWidth);
}
double rise_d1(double u) {
  if (u <= 1.0 || u >= 1.0 + kTemplateWidth) return 0.0;
  return s5_d1((u - 1.0) / kTemplateWidth) / kTemplateWidth;
}
double rise_d2(double u) {
  if (u <= 1.0 || u >= 1.0 + kTemplateWidth) return 0.0;
  return s5_d2((u - 1.0) / kTemplateWidth) / (kTemplateWidth * kTemplateWidth);
}

}  // namespace

double CutoffPair::chi_plus(double t) const {
  if (t <= 1.0) return 0.0;
  return rise(kappa / 60.0 * (t - 1.0) + 1.0);
}

double CutoffPair::chi_plus_d1(double t) const {
  if (t <= 1.0) return 0.0;
  return kappa / 60.0 * rise_d1(kappa / 60.0 * (t - 1.0) + 1.0);
}

double CutoffPair::chi_plus_d2(double t) const {
  if (t <= 1.0) return 0.0;
  const double a = kappa / 60.0;
  return a * a * rise_d2(a * (t - 1.0) + 1.0);
}

double CutoffPair::chi_minus(double t) const {
  if (t <= tau_n) return 0.0;
  if (t >= 2.0 * tau_n) return 1.0;
  return s5((t - tau_n) / tau_n);
}

double CutoffPair::grad_sup() const {
  double m = 0.0;
  const double hi = 3.0 * tau_n;
  for (int i = 0; i <= 10000; ++i) m = std::max(m, std::abs(chi_plus_d1(hi * i / 10000.0)));
  return m;
}

double CutoffPair::laplace_sup() const {
  double m = 0.0;
  const double hi = 3.0 * tau_n;
  for (int i = 0; i <= 10000; ++i) {
    const double t = hi * i / 10000.0;
    m = std::max(m, std::abs(chi_plus_d2(t) - chi_plus_d1(t)));
  }
  return m;
}

CutoffPair build_cutoffs(double kappa) {
  if (kappa <= 0.0 || kappa > 1.0)
    throw std::invalid_argument("build_cutoffs: kappa must be in (0,1]");
  CutoffPair c;
  c.kappa = kappa;
  c.tau0 = 1.0 + kTemplateWidth;
  c.tau_n = 60.0 / kappa * (c.tau0 - 1.0) + 1.0;

  // construction-time verification of the certified bounds
  const double bound = kappa / 30.0;
  const double hi = 3.0 * c.tau_n;
  for (int i = 0; i <= 10000; ++i) {
    const double t = hi * i / 10000.0;
    const double d1 = c.chi_plus_d1(t);
    const double lap = c.chi_plus_d2(t) - d1;
    if (std::abs(d1) > bound || std::abs(lap) > bound)
      throw NumericError("build_cutoffs: derivative bound violated at t=" + std::to_string(t));
    const double stagger = c.chi_plus(t) * c.chi_minus(t) - c.chi_minus(t);
    if (stagger != 0.0)
      throw NumericError("build_cutoffs: stagger identity violated at t=" + std::to_string(t));
  }
  return c;
}

// ---------------------------------------------------------------------------
// free resolvent kernel

namespace {

// integrand after t = u^2 (left half) / 1-t = v^2 (right half)
template <typename F>
double integrate_halves(const F& f_of_t, double s, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double split = std::sqrt(0.5);
  auto left = [&](double u) {
    const double t = u * u;
    return 2.0 * std::pow(u, 2.0 * s - 1.0) * std::pow(1.0 - t, s - 1.0) * f_of_t(t);
  };
  auto right = [&](double v) {
    const double t = 1.0 - v * v;
    return 2.0 * std::pow(v, 2.0 * s - 1.0) * std::pow(t, s - 1.0) * f_of_t(t);
  };
  const double a = gauss_kronrod<double, 31>::integrate(left, 0.0, split, 15, rel_tol);
  const double b = gauss_kronrod<double, 31>::integrate(right, 0.0, split, 15, rel_tol);
  return a + b;
}

}  // namespace

double resolvent_kernel(double s, double r, double rel_tol) {
  if (s < 0.5 || s > 1.0) throw std::domain_error("resolvent_kernel: s must be in [1/2,1]");
  if (r <= 0.0) throw std::domain_error("resolvent_kernel: r must be positive");
  const double sh2 = std::sinh(r / 2.0) * std::sinh(r / 2.0);
  auto f = [&](double t) { return std::pow(t + sh2, -s); };
  return integrate_halves(f, s, rel_tol) / (4.0 * kPi);
}

double resolvent_kernel_dr(double s, double r, double rel_tol) {
  if (s < 0.5 || s > 1.0) throw std::domain_error("resolvent_kernel_dr: s must be in [1/2,1]");
  if (r <= 0.0) throw std::domain_error("resolvent_kernel_dr: r must be positive");
  const double sh2 = std::sinh(r / 2.0) * std::sinh(r / 2.0);
  const double dsh2 = 0.5 * std::sinh(r);  // d/dr sinh^2(r/2)
  auto f = [&](double t) { return -s * std::pow(t + sh2, -s - 1.0) * dsh2; };
  return integrate_halves(f, s, rel_tol) / (4.0 * kPi);
}

double resolvent_closed_form_s1(double r) {
  return std::log(1.0 / std::tanh(r / 2.0)) / (2.0 * kPi);
}

double trunc_window(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  return 1.0 - s5(u);
}
double trunc_window_d1(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return -s5_d1(u);
}
double trunc_window_d2(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return -s5_d2(u);
}

double remainder_kernel(double s, double T, double r0) {
  if (s < 0.5 || s > 1.0) throw std::domain_error("remainder_kernel: s must be in [1/2,1]");
  if (T <= 0.0 || r0 <= 0.0) throw std::domain_error("remainder_kernel: T, r0 must be positive");
  const double u = r0 - T;
  if (u <= 0.0 || u >= 1.0) return 0.0;  // exact support [T, T+1]
  const double c1 = trunc_window_d1(u);
  const double c2 = trunc_window_d2(u);
  return (-c2 - c1 / std::tanh(r0)) * resolvent_kernel(s, r0) -
         2.0 * c1 * resolvent_kernel_dr(s, r0);
}

SDerivativeReport kernel_s_derivative_check(double T, double h) {
  SDerivativeReport rep;
  auto max_on_grid = [&](double step) {
    double m = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double s = 0.5 + step + (1.0 - 2.0 * step - 0.5) * i / 8.0;
      for (int j = 1; j < 20; ++j) {
        const double r0 = T + j / 20.0;
        const double d =
            (remainder_kernel(s + step, T, r0) - remainder_kernel(s - step, T, r0)) /
            (2.0 * step);
        m = std::max(m, std::abs(d));
      }
    }
    return m;
  };
  rep.max_abs = max_on_grid(h);
  rep.max_abs_half = max_on_grid(h / 2.0);
  rep.rel_change = std::abs(rep.max_abs - rep.max_abs_half) / std::max(rep.max_abs, 1e-300);
  return rep;
}

double spherical_phi0(double r) {
  // Mehler-Dirichlet form (sqrt(2)/pi) ∫_0^r dt/sqrt(cosh r - cosh t) with
  // t = r - v² and cosh A - cosh B = 2 sinh((A+B)/2) sinh((A-B)/2), which
  // removes the endpoint singularity and the cancellation near t = r
  using boost::math::quadrature::gauss_kronrod;
  if (r <= 0.0) return 1.0;
  auto f = [r](double v) {
    const double half = 0.5 * v * v;
    return 2.0 * v / std::sqrt(2.0 * std::sinh(r - half) * std::sinh(half));
  };
  const double integral =
      gauss_kronrod<double, 31>::integrate(f, 0.0, std::sqrt(r), 15, 1e-12);
  return std::sqrt(2.0) / kPi * integral;
}

NormEnvelope operator_norm_envelope(double s, double T) {
  if (s <= 0.5) throw std::domain_error("operator_norm_envelope: s must be > 1/2");
  using boost::math::quadrature::gauss_kronrod;
  NormEnvelope env;
  auto plain = [&](double r) { return std::abs(remainder_kernel(s, T, r)) * std::sinh(r); };
  auto weighted = [&](double r) {
    return std::abs(remainder_kernel(s, T, r)) * spherical_phi0(r) * std::sinh(r);
  };
  env.schur_plain = 2.0 * kPi * gauss_kronrod<double, 31>::integrate(plain, T, T + 1.0, 10, 1e-9);
  env.schur_weighted =
      2.0 * kPi * gauss_kronrod<double, 31>::integrate(weighted, T, T + 1.0, 10, 1e-9);
  env.envelope_c = env.schur_weighted / (T * std::exp((0.5 - s) * T));
  if (T > 1.0) {
    const double lt = std::log(T);
    env.kappa_pairing = 4.0 * lt * lt / (T * T);
    env.decay_value = T * std::exp(-T * std::sqrt(env.kappa_pairing));
    env.decay_ok = env.decay_value < 0.2;
  }
  return env;
}

KernelGrid make_kernel_grid(double s, double T, const std::vector<double>& r_points) {
  KernelGrid g;
  g.s = s;
  g.T = T;
  double prev_R = std::numeric_limits<double>::infinity();
  for (double r : r_points) {
    const double R = resolvent_kernel(s, r);
    if (R <= 0.0) throw NumericError("make_kernel_grid: kernel not positive at r=" + std::to_string(r));
    if (R > prev_R + 1e-12)
      throw NumericError("make_kernel_grid: kernel not decreasing at r=" + std::to_string(r));
    prev_R = R;
    g.r.push_back(r);
    g.R.push_back(R);
    g.dR.push_back(resolvent_kernel_dr(s, r));
    g.L.push_back(remainder_kernel(s, T, r));
  }
  return g;
}

KernelTable::KernelTable(double s, double T, int npts) : s_(s), T_(T) {
  if (npts < 2) throw std::invalid_argument("KernelTable: need at least 2 points");
  dr_ = 1.0 / (npts - 1);
  vals_.resize(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) vals_[static_cast<std::size_t>(i)] = remainder_kernel(s, T, T + i * dr_);
}

double KernelTable::value(double r) const {
  const double u = r - T_;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double x = u / dr_;
  const auto i = static_cast<std::size_t>(x);
  const double frac = x - double(i);
  return vals_[i] * (1.0 - frac) + vals_[i + 1] * frac;
}

QuadratureGrid make_grid(const GridSpec& spec, double T, const CutoffPair& cutoffs) {
  if (spec.nx < 1 || spec.ny < 1) throw GridError("make_grid: empty grid");
  if (spec.y_min <= 0.0) throw GridError("make_grid: y_min must be positive");
  const double y_max =
      spec.y_max > 0.0 ? spec.y_max : 2.0 * cutoffs.tau_n * std::exp(T + 1.0);
  if (y_max <= spec.y_min) throw GridError("make_grid: empty height range");

  QuadratureGrid g;
  g.area_expected = 1.0 / spec.y_min - 1.0 / y_max;
  const double dx = 1.0 / spec.nx;
  if (spec.area_uniform) {
    const double u_lo = -1.0 / spec.y_min, u_hi = -1.0 / y_max;
    const double du = (u_hi - u_lo) / spec.ny;
    for (int j = 0; j < spec.ny; ++j) {
      const double u = u_lo + (j + 0.5) * du;
      const double y = -1.0 / u;
      for (int i = 0; i < spec.nx; ++i) {
        g.xs.push_back((i + 0.5) * dx);
        g.ys.push_back(y);
        g.w.push_back(dx * du);  // exact hyperbolic cell area
      }
    }
  } else {
    const double dy = (y_max - spec.y_min) / spec.ny;
    for (int j = 0; j < spec.ny; ++j) {
      const double y = spec.y_min + (j + 0.5) * dy;
      for (int i = 0; i < spec.nx; ++i) {
        g.xs.push_back((i + 0.5) * dx);
        g.ys.push_back(y);
        g.w.push_back(dx * dy / (y * y));
      }
    }
  }
  for (double w : g.w) g.weight_sum += w;
  if (std::abs(g.weight_sum - g.area_expected) > 0.05 * g.area_expected)
    throw GridError("make_grid: weight sum misses region area by more than 5%");
  g.sqrt_w.reserve(g.w.size());
  for (double w : g.w) g.sqrt_w.push_back(std::sqrt(w));
  return g;
}

DiscretizedAGamma discretize_a_gamma(const SurfaceModel& model, const ReducedWord& gamma,
                                     double s, double T, const CutoffPair& cutoffs,
                                     const QuadratureGrid& grid, const KernelTable* table) {
  DiscretizedAGamma ag;
  ag.gamma = gamma;
  ag.s = s;
  ag.T = T;

  KernelTable local_table = table ? KernelTable(*table) : KernelTable(s, T);
  if (table && (table->s() != s || table->T() != T))
    throw std::invalid_argument("discretize_a_gamma: kernel table (s,T) mismatch");

  const Moebius g = model.word_to_moebius(gamma);
  const auto n = grid.size();
  const auto N = static_cast<Eigen::Index>(n);

  // column factor (1 - χ⁻(y_j)) √w_j
  std::vector<double> col_factor(n);
  for (std::size_t j = 0; j < n; ++j)
    col_factor[j] = (1.0 - cutoffs.chi_minus(grid.ys[j])) * grid.sqrt_w[j];

  const double cosh_lo = std::cosh(T), cosh_hi = std::cosh(T + 1.0);
  ag.matrix = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> coshd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> gx = g.apply({grid.xs[i], grid.ys[i]});
    kernels::cosh_dist_row(gx.real(), gx.imag(), grid.xs.data(), grid.ys.data(),
                           coshd.data(), n);
    const double row_factor = grid.sqrt_w[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (coshd[j] <= cosh_lo || coshd[j] >= cosh_hi) continue;
      if (col_factor[j] == 0.0) continue;
      const double r = std::acosh(coshd[j]);
      ag.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row_factor * local_table.value(r) * col_factor[j];
    }
  }

  ag.hs_norm = ag.matrix.norm();  // Frobenius = Hilbert-Schmidt in this basis
  if (ag.hs_norm > 0.0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(ag.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    ag.singular_values = svd.singularValues();
    ag.svd_u = svd.matrixU();
    ag.svd_v = svd.matrixV();
  } else {
    ag.singular_values = Eigen::VectorXd::Zero(N);
  }
  return ag;
}

SvdTruncation svd_truncate(const DiscretizedAGamma& ag, std::size_t s_size) {
  if (s_size < 1) throw std::invalid_argument("svd_truncate: s_size must be >= 1");
  SvdTruncation tr;
  tr.target = 1.0 / (20.0 * double(s_size));
  tr.sufficient_rank_bound = 400.0 * ag.hs_norm * ag.hs_norm * double(s_size) * double(s_size);

  const Eigen::Index full = ag.singular_values.size();
  Eigen::Index r = full;
  for (Eigen::Index i = 0; i < full; ++i) {
    if (ag.singular_values[i] <= tr.target) {
      r = i;
      break;
    }
  }
  tr.rank = r;
  tr.achieved_error = r < full ? ag.singular_values[r] : 0.0;
  if (r == 0 || ag.hs_norm == 0.0) {
    tr.rank = ag.hs_norm == 0.0 ? 0 : r;
    tr.truncated = Eigen::MatrixXd::Zero(ag.matrix.rows(), ag.matrix.cols());
    return tr;
  }
  tr.truncated = ag.svd_u.leftCols(r) * ag.singular_values.head(r).asDiagonal() *
                 ag.svd_v.leftCols(r).transpose();
  return tr;
}

double deviation_ratio(const SurfaceModel& model, const ReducedWord& gamma, double s1,
                       double s2, double T, const CutoffPair& cutoffs,
                       const QuadratureGrid& grid) {
  if (s1 == s2) throw std::invalid_argument("deviation_ratio: s1 and s2 must differ");
  const DiscretizedAGamma a1 = discretize_a_gamma(model, gamma, s1, T, cutoffs, grid);
  const DiscretizedAGamma a2 = discretize_a_gamma(model, gamma, s2, T, cutoffs, grid);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a1.matrix - a2.matrix);
  return svd.singularValues()[0] / std::abs(s1 - s2);
}

}  // namespace specgap
