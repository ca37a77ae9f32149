#include "specgap/linearization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace specgap {

using cplx = std::complex<double>;

HalfStep half_step(const CoefficientMap& cm, int l) {
  if (!cm.is_hermitian())
    throw std::invalid_argument("half_step: coefficient map must be hermitian (hermitize first)");
  if (cm.radius() > l)
    throw std::invalid_argument("half_step: support not contained in B_l");

  HalfStep hs;
  hs.input = cm;
  hs.l_padded = (l % 2 == 0) ? l : l + 1;

  SupportSet s = cm.support();
  hs.s1 = split_support(s, hs.l_padded);
  const std::vector<ReducedWord> idx(hs.s1.elements.begin(), hs.s1.elements.end());
  const auto K = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index m = cm.m;

  // pair multiplicities over S1 × S1
  for (const auto& g : idx)
    for (const auto& h : idx) {
      const ReducedWord w = mul(g.inverse(), h);
      hs.multiplicity[w] += 1;
    }

  // ã_{g,h} = a_{g^{-1}h} / multiplicity, laid out with the S1 index outermost
  hs.a_tilde = Eigen::MatrixXcd::Zero(K * m, K * m);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) {
      const ReducedWord w = mul(idx[static_cast<std::size_t>(i)].inverse(),
                                idx[static_cast<std::size_t>(j)]);
      const auto it = cm.entries.find(w);
      if (it == cm.entries.end()) continue;
      hs.a_tilde.block(i * m, j * m, m, m) = it->second / double(hs.multiplicity.at(w));
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs.a_tilde);
  if (es.info() != Eigen::Success) throw NumericError("half_step: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  hs.a_tilde_norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  hs.theta = double(K) * hs.a_tilde_norm;

  // b̃ = PSD square root of ã + ‖ã‖ Id (eigenvalues clamped at -1e-10)
  Eigen::VectorXd shifted = ev.array() + hs.a_tilde_norm;
  for (Eigen::Index i = 0; i < shifted.size(); ++i) {
    if (shifted[i] < -1e-10)
      throw NumericError("half_step: shifted matrix not PSD, eigenvalue " +
                         std::to_string(shifted[i]));
    shifted[i] = std::sqrt(std::max(0.0, shifted[i]));
  }
  hs.b_tilde = es.eigenvectors() * shifted.asDiagonal() * es.eigenvectors().adjoint();

  // b_g = b̃ (e_{g,∅} ⊗ Id_m): the g-th block column of b̃ moved to the ∅ slot
  const auto empty_at = static_cast<Eigen::Index>(
      std::distance(idx.begin(), std::find(idx.begin(), idx.end(), ReducedWord())));
  hs.output.m = static_cast<int>(K * m);
  for (Eigen::Index i = 0; i < K; ++i) {
    Eigen::MatrixXcd bg = Eigen::MatrixXcd::Zero(K * m, K * m);
    bg.block(0, empty_at * m, K * m, m) = hs.b_tilde.block(0, i * m, K * m, m);
    hs.output.entries.emplace(idx[static_cast<std::size_t>(i)], std::move(bg));
  }
  return hs;
}

double verify_step(const HalfStep& hs, const RepresentationSample& rep, bool zero_mean,
                   const NormOptions& opt) {
  const double p_norm = spectral_norm(assemble(hs.input, rep, zero_mean), opt);
  const double q_norm = spectral_norm(assemble(hs.output, rep, zero_mean), opt);
  return std::abs((q_norm * q_norm - hs.theta) - p_norm);
}

LinearizationChain build_chain(const CoefficientMap& cm, int l, Eigen::Index dim_cap,
                               bool ledger_only) {
  if (l < 2) throw std::invalid_argument("build_chain: l must be >= 2");
  if (!cm.is_hermitian())
    throw std::invalid_argument("build_chain: coefficient map must be hermitian");
  if (cm.radius() > l)
    throw std::invalid_argument("build_chain: support not contained in B_l");

  LinearizationChain chain;
  chain.v = static_cast<int>(std::ceil(std::log2(double(l))));
  chain.closed_form_bound = 2.0 * l * std::pow(double(cm.entries.size()), chain.v) *
                      std::pow(double(l), chain.v - 1);
  chain.adjusted_bound = chain.closed_form_bound;
  chain.n_v_unit_free = 1.0;

  CoefficientMap cur = cm;
  SupportSet cur_support = cm.support();
  int cur_l = l;
  Eigen::Index factor = 1;
  int level = 0;
  while (cur_l > 1) {
    ++level;
    if (level > 1) {
      factor *= 2;  // hermitization doubling between levels
      if (!ledger_only) cur = hermitize(cur);
    }
    const int padded = (cur_l % 2 == 0) ? cur_l : cur_l + 1;
    const SupportSet s1 = split_support(cur_support, cur_l);

    ChainLevel lv;
    lv.l_in = padded;
    lv.s_size_e = s1.size();
    lv.s_size = s1.size() - (s1.contains(ReducedWord()) ? 1 : 0);
    factor *= static_cast<Eigen::Index>(s1.size());
    lv.n_k = factor;
    if (static_cast<Eigen::Index>(cm.m) * factor > dim_cap)
      throw BudgetExceeded("build_chain: dimension cap " + std::to_string(dim_cap) +
                           " exceeded at level " + std::to_string(level));

    if (!ledger_only) {
      HalfStep hs = half_step(cur, cur_l);
      if (!(hs.s1.elements == s1.elements))
        throw NumericError("build_chain: ledger/step support mismatch");
      lv.theta = hs.theta;
      lv.a_tilde_norm = hs.a_tilde_norm;
      cur = hs.output;
      chain.steps.push_back(std::move(hs));
    }

    chain.n_v_unit_free *= 2.0 * double(lv.s_size);
    chain.adjusted_bound *= double(lv.s_size + 1) / double(lv.s_size);
    chain.levels.push_back(lv);

    cur_support = s1;
    cur_l = padded / 2;
  }
  if (level != chain.v)
    throw NumericError("build_chain: level count mismatch with ceil(log2 l)");

  chain.final_radius = cur_support.radius();
  chain.n_v = factor;
  if (chain.final_radius > 1)
    throw NumericError("build_chain: final support not contained in B_1");
  if (!ledger_only) chain.final_map = cur;
  return chain;
}

nlohmann::json LinearizationChain::ledger_json() const {
  nlohmann::json j;
  j["v"] = v;
  j["n_v"] = n_v;
  j["n_v_unit_free"] = n_v_unit_free;
  j["closed_form_bound"] = closed_form_bound;
  j["adjusted_bound"] = adjusted_bound;
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& level : levels) {
    lv.push_back({{"l_in", level.l_in},
                  {"s_size", level.s_size},
                  {"s_size_with_unit", level.s_size_e},
                  {"n_k", level.n_k},
                  {"theta", level.theta},
                  {"a_tilde_norm", level.a_tilde_norm}});
  }
  j["levels"] = std::move(lv);
  return j;
}

EpsilonPropagation propagate_epsilon(double eps, int l, std::size_t s_size) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::domain_error("propagate_epsilon: need 0 <= eps < 1");
  if (l < 2) throw std::invalid_argument("propagate_epsilon: l must be >= 2");
  EpsilonPropagation out;
  out.v = static_cast<int>(std::ceil(std::log2(double(l))));
  double product = eps;
  double four_pow = 4.0;
  for (int i = 1; i <= out.v; ++i) {
    product *= 4.0 * four_pow * double(s_size);
    four_pow *= 4.0;
  }
  out.exact = product;
  out.closed_form = 2.0 * eps * double(l) * double(l) *
                    std::pow(double(s_size), out.v) * std::pow(double(l), out.v - 1);
  out.admissible_exact = out.exact < 1.0;
  out.admissible_closed = out.closed_form < 1.0;
  return out;
}

}  // namespace specgap
