#include "specgap/operator_lab.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <Eigen/SVD>

namespace specgap {

using cplx = std::complex<double>;

SupportSet CoefficientMap::support() const {
  SupportSet s;
  for (const auto& [w, a] : entries) s.elements.insert(w);
  return s;
}

int CoefficientMap::radius() const { return support().radius(); }

bool CoefficientMap::is_hermitian(double tol) const {
  for (const auto& [w, a] : entries) {
    const ReducedWord wi = w.inverse();
    const auto it = entries.find(wi);
    const Eigen::MatrixXcd other =
        it != entries.end() ? it->second : Eigen::MatrixXcd::Zero(m, m).eval();
    if ((a - other.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

CoefficientMap hermitize(const CoefficientMap& cm) {
  CoefficientMap out;
  out.m = 2 * cm.m;
  SupportSet closure;
  for (const auto& [w, a] : cm.entries) {
    closure.elements.insert(w);
    closure.elements.insert(w.inverse());
  }
  for (const auto& w : closure.elements) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(out.m, out.m);
    const auto it = cm.entries.find(w);
    if (it != cm.entries.end()) b.topRightCorner(cm.m, cm.m) = it->second;
    const auto jt = cm.entries.find(w.inverse());
    if (jt != cm.entries.end()) b.bottomLeftCorner(cm.m, cm.m) = jt->second.adjoint();
    out.entries.emplace(w, std::move(b));
  }
  return out;
}

double spectral_norm(const Eigen::MatrixXcd& a, const NormOptions& opt) {
  if (a.rows() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  }
  (void)opt;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()[0];
}

double triangle_upper(const CoefficientMap& cm) {
  double s = 0.0;
  for (const auto& [w, a] : cm.entries) s += spectral_norm(a);
  return s;
}

AssembledOperator assemble(const CoefficientMap& cm, const RepresentationSample& rep,
                           bool zero_mean, Eigen::Index dense_cap) {
  if (zero_mean && rep.flavor != Flavor::permutation)
    throw std::invalid_argument("assemble: zero_mean needs the permutation flavor");
  if (cm.radius() > 0) {
    for (const auto& [w, a] : cm.entries)
      for (int letter : w.letters())
        if (std::abs(letter) > rep.d)
          throw std::invalid_argument("assemble: support letter outside representation rank");
  }
  for (const auto& [w, a] : cm.entries)
    if (a.rows() != cm.m || a.cols() != cm.m)
      throw std::invalid_argument("assemble: coefficient block shape mismatch");

  AssembledOperator op;
  const Eigen::Index m = cm.m, n = rep.n;
  op.dim = m * n;
  op.hermitian = cm.is_hermitian();

  // evaluated (and possibly compressed) representation matrices, one per key
  std::vector<Eigen::MatrixXcd> rhos;
  std::vector<const Eigen::MatrixXcd*> as;
  rhos.reserve(cm.entries.size());
  const Eigen::MatrixXd proj =
      zero_mean ? zero_mean_projector(rep.n) : Eigen::MatrixXd();
  for (const auto& [w, a] : cm.entries) {
    Eigen::MatrixXcd r = evaluate(rep, w);
    if (zero_mean) r = proj * r * proj;
    rhos.push_back(std::move(r));
    as.push_back(&a);
  }

  if (op.dim <= dense_cap) {
    op.dense = Eigen::MatrixXcd::Zero(op.dim, op.dim);
    for (std::size_t k = 0; k < rhos.size(); ++k) {
      const Eigen::MatrixXcd& a = *as[k];
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          if (a(i, j) != cplx(0.0)) op.dense.block(i * n, j * n, n, n) += a(i, j) * rhos[k];
    }
    return op;
  }

  // matrix-free Kronecker action: x viewed as an m×n row-major matrix X,
  // (a ⊗ ρ) x = a X ρ^T
  auto amats = std::make_shared<std::vector<Eigen::MatrixXcd>>();
  for (const auto& [w, a] : cm.entries) amats->push_back(a);
  auto shared_rhos = std::make_shared<std::vector<Eigen::MatrixXcd>>(std::move(rhos));
  auto make_apply = [m, n, amats, shared_rhos](bool adjoint) {
    return [m, n, amats, shared_rhos, adjoint](const cplx* x, cplx* y) {
      using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      Eigen::Map<const RowMat> X(x, m, n);
      Eigen::Map<RowMat> Y(y, m, n);
      Y.setZero();
      for (std::size_t k = 0; k < amats->size(); ++k) {
        if (!adjoint)
          Y.noalias() += (*amats)[k] * X * (*shared_rhos)[k].transpose();
        else
          Y.noalias() += (*amats)[k].adjoint() * X * (*shared_rhos)[k].conjugate();
      }
    };
  };
  op.apply = make_apply(false);
  op.apply_adjoint = make_apply(true);
  return op;
}

double spectral_norm(const AssembledOperator& op, const NormOptions& opt) {
  if (op.dim == 0) return 0.0;
  if (op.is_dense()) return spectral_norm(op.dense, opt);
  if (op.hermitian) {
    return lanczos_extremal<cplx>(
        [&op](const cplx* x, cplx* y) { op.apply(x, y); }, op.dim, opt);
  }
  // non-Hermitian: largest eigenvalue of A*A
  std::vector<cplx> tmp(static_cast<std::size_t>(op.dim));
  const double sq = lanczos_extremal<cplx>(
      [&op, &tmp](const cplx* x, cplx* y) {
        op.apply(x, tmp.data());
        op.apply_adjoint(tmp.data(), y);
      },
      op.dim, opt);
  return std::sqrt(std::max(0.0, sq));
}

// ---------------------------------------------------------------------------
// tree-ball compression of the regular representation

TreeBall::TreeBall(int d, int R, std::size_t budget) : d_(d), R_(R) {
  if (d < 1) throw std::invalid_argument("TreeBall: rank must be >= 1");
  if (R < 0) throw std::invalid_argument("TreeBall: radius must be >= 0");
  const std::size_t q = 2 * static_cast<std::size_t>(d) - 1;
  std::size_t total = 1, block = 2 * static_cast<std::size_t>(d);
  offset_.push_back(0);
  for (int k = 1; k <= R; ++k) {
    offset_.push_back(total);
    total += block;
    if (total > budget)
      throw BudgetExceeded("TreeBall: ball budget " + std::to_string(budget) +
                           " exceeded at radius " + std::to_string(k));
    block *= q;
  }
  offset_.push_back(total);  // sentinel: one past the last depth block

  last_.assign(total, 0xFF);
  depth_.assign(total, 0);
  if (R >= 1) {
    for (std::size_t c = 0; c < 2 * static_cast<std::size_t>(d); ++c) {
      last_[1 + c] = static_cast<std::uint8_t>(c);
      depth_[1 + c] = 1;
    }
  }
  for (int k = 2; k <= R; ++k) {
    const std::size_t parent_begin = offset_[static_cast<std::size_t>(k - 1)];
    const std::size_t parent_end = offset_[static_cast<std::size_t>(k)];
    std::size_t child = offset_[static_cast<std::size_t>(k)];
    for (std::size_t p = parent_begin; p < parent_end; ++p) {
      const std::uint8_t forbidden = last_[p] ^ 1u;
      for (std::size_t c = 0; c < 2 * static_cast<std::size_t>(d); ++c) {
        if (c == forbidden) continue;
        last_[child] = static_cast<std::uint8_t>(c);
        depth_[child] = static_cast<std::uint8_t>(k);
        ++child;
      }
    }
  }
}

std::size_t TreeBall::step(std::size_t idx, int letter) const {
  const std::uint8_t code = letter > 0 ? static_cast<std::uint8_t>(2 * (letter - 1))
                                       : static_cast<std::uint8_t>(2 * (-letter - 1) + 1);
  if (idx == 0) return R_ >= 1 ? 1 + code : npos;
  const std::uint8_t ell = last_[idx];
  const int k = depth_[idx];
  const std::size_t q = 2 * static_cast<std::size_t>(d_) - 1;
  if (code == (ell ^ 1u)) {
    // cancellation: parent
    if (k == 1) return 0;
    const std::size_t pos = idx - offset_[static_cast<std::size_t>(k)];
    return offset_[static_cast<std::size_t>(k - 1)] + pos / q;
  }
  if (k == R_) return npos;
  const std::size_t pos = idx - offset_[static_cast<std::size_t>(k)];
  const std::size_t slot = code - (code > (ell ^ 1u) ? 1 : 0);
  return offset_[static_cast<std::size_t>(k + 1)] + pos * q + slot;
}

std::size_t TreeBall::apply_word(std::size_t idx, const ReducedWord& w) const {
  for (int letter : w.letters()) {
    idx = step(idx, letter);
    if (idx == npos) return npos;
  }
  return idx;
}

namespace {

// compression of Σ a_γ ⊗ λ(γ) to C^m ⊗ ℓ²(B_R); node-major layout
// (row = node * m + coeff index). λ(γ) δ_w = δ_{w γ^{-1}}.
template <typename Scalar>
struct RegularCompression {
  const TreeBall& ball;
  Eigen::Index m;
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> blocks;
  std::vector<std::vector<std::int32_t>> targets;  // -1 = outside the ball

  Eigen::Index dim() const { return static_cast<Eigen::Index>(ball.size()) * m; }

  void apply(const Scalar* x, Scalar* y) const {
    const std::size_t nn = ball.size();
    std::fill(y, y + dim(), Scalar(0));
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const auto& a = blocks[k];
      const auto& t = targets[k];
      if (m == 1) {
        const Scalar a00 = a(0, 0);
        for (std::size_t w = 0; w < nn; ++w) {
          const std::int32_t tw = t[w];
          if (tw >= 0) y[tw] += a00 * x[w];
        }
      } else {
        for (std::size_t w = 0; w < nn; ++w) {
          const std::int32_t tw = t[w];
          if (tw < 0) continue;
          Eigen::Map<const Eigen::Vector<Scalar, Eigen::Dynamic>> xv(x + w * m, m);
          Eigen::Map<Eigen::Vector<Scalar, Eigen::Dynamic>> yv(y + tw * m, m);
          yv.noalias() += a * xv;
        }
      }
    }
  }
};

template <typename Scalar>
double regular_norm_lower_impl(const CoefficientMap& cm, int R, const NormOptions& opt,
                               std::size_t ball_budget, int rank) {
  TreeBall ball(rank, R, ball_budget);
  if (ball.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()) - 1)
    throw BudgetExceeded("regular_norm_lower: ball too large for 32-bit node indices");
  RegularCompression<Scalar> comp{ball, cm.m, {}, {}};
  for (const auto& [w, a] : cm.entries) {
    if constexpr (std::is_same_v<Scalar, double>)
      comp.blocks.push_back(a.real());
    else
      comp.blocks.push_back(a);
    const ReducedWord winv = w.inverse();
    std::vector<std::int32_t> t(ball.size());
    for (std::size_t idx = 0; idx < ball.size(); ++idx) {
      const std::size_t tgt = ball.apply_word(idx, winv);
      t[idx] = tgt == TreeBall::npos ? -1 : static_cast<std::int32_t>(tgt);
    }
    comp.targets.push_back(std::move(t));
  }

  const Eigen::Index dim = comp.dim();
  if (cm.is_hermitian()) {
    return lanczos_extremal<Scalar>(
        [&comp](const Scalar* x, Scalar* y) { comp.apply(x, y); }, dim, opt);
  }
  // A*A for non-hermitian maps; the adjoint compression is the compression
  // of the adjoint map (a_γ -> a*_γ at key γ^{-1}), same targets reversed
  CoefficientMap adj;
  adj.m = cm.m;
  for (const auto& [w, a] : cm.entries) adj.entries[w.inverse()] = a.adjoint();
  RegularCompression<Scalar> comp_adj{ball, cm.m, {}, {}};
  for (const auto& [w, a] : adj.entries) {
    if constexpr (std::is_same_v<Scalar, double>)
      comp_adj.blocks.push_back(a.real());
    else
      comp_adj.blocks.push_back(a);
    const ReducedWord winv = w.inverse();
    std::vector<std::int32_t> t(ball.size());
    for (std::size_t idx = 0; idx < ball.size(); ++idx) {
      const std::size_t tgt = ball.apply_word(idx, winv);
      t[idx] = tgt == TreeBall::npos ? -1 : static_cast<std::int32_t>(tgt);
    }
    comp_adj.targets.push_back(std::move(t));
  }
  std::vector<Scalar> tmp(static_cast<std::size_t>(dim));
  const double sq = lanczos_extremal<Scalar>(
      [&](const Scalar* x, Scalar* y) {
        comp.apply(x, tmp.data());
        comp_adj.apply(tmp.data(), y);
      },
      dim, opt);
  return std::sqrt(std::max(0.0, sq));
}

}  // namespace

double regular_norm_lower(const CoefficientMap& cm, int R, const NormOptions& opt,
                          std::size_t ball_budget) {
  if (cm.entries.empty()) return 0.0;
  if (R < cm.radius())
    throw std::invalid_argument("regular_norm_lower: R must cover the support radius");
  int rank = 1;
  bool real = true;
  for (const auto& [w, a] : cm.entries) {
    for (int letter : w.letters()) rank = std::max(rank, std::abs(letter));
    if (a.imag().cwiseAbs().maxCoeff() > 0.0) real = false;
  }
  return real ? regular_norm_lower_impl<double>(cm, R, opt, ball_budget, rank)
              : regular_norm_lower_impl<cplx>(cm, R, opt, ball_budget, rank);
}

nlohmann::json CoefficientMap::to_json() const {
  nlohmann::json j;
  j["m"] = m;
  nlohmann::json items = nlohmann::json::array();
  for (const auto& [w, a] : entries) {
    nlohmann::json item;
    item["word"] = w.letters();
    nlohmann::json mat = nlohmann::json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c)
        mat.push_back({a(r, c).real(), a(r, c).imag()});
    item["matrix"] = std::move(mat);
    items.push_back(std::move(item));
  }
  j["entries"] = std::move(items);
  return j;
}

CoefficientMap CoefficientMap::from_json(const nlohmann::json& j) {
  CoefficientMap cm;
  cm.m = j.at("m").get<int>();
  for (const auto& item : j.at("entries")) {
    const auto letters = item.at("word").get<std::vector<int>>();
    int rank = 1;
    for (int l : letters) rank = std::max(rank, std::abs(l));
    const ReducedWord w = ReducedWord::reduce(letters, rank);
    Eigen::MatrixXcd a(cm.m, cm.m);
    const auto& mat = item.at("matrix");
    if (static_cast<Eigen::Index>(mat.size()) != a.size())
      throw std::invalid_argument("CoefficientMap::from_json: matrix size mismatch");
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c, ++idx)
        a(r, c) = cplx(mat[idx][0].get<double>(), mat[idx][1].get<double>());
    cm.entries.emplace(w, std::move(a));
  }
  return cm;
}

}  // namespace specgap
