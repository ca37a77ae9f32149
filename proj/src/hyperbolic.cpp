#include "specgap/hyperbolic.hpp"

#include <cmath>
#include <deque>
#include <map>

#include "specgap/errors.hpp"

namespace specgap {

Moebius Moebius::inverse() const {
  Moebius r;
  r.mat << mat(1, 1), -mat(0, 1), -mat(1, 0), mat(0, 0);
  return r;
}

std::complex<double> Moebius::apply(std::complex<double> z) const {
  return (mat(0, 0) * z + mat(0, 1)) / (mat(1, 0) * z + mat(1, 1));
}

double cosh_hyp_distance(std::complex<double> z, std::complex<double> w) {
  if (z.imag() <= 0.0 || w.imag() <= 0.0)
    throw std::domain_error("hyp_distance: points must be in the upper half-plane");
  return 1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag());
}

double hyp_distance(std::complex<double> z, std::complex<double> w) {
  return std::acosh(std::max(1.0, cosh_hyp_distance(z, w)));
}

SurfaceModel SurfaceModel::punctured_torus() {
  SurfaceModel m;
  m.d = 2;
  Moebius g1, g2;
  g1.mat << 1, 1, 1, 2;
  g2.mat << 1, -1, -1, 2;
  m.generators = {g1, g2};
  m.base_point = {0.0, 1.0};
  m.name = "punctured_torus";
  m.validate();
  return m;
}

Moebius SurfaceModel::word_to_moebius(const ReducedWord& w) const {
  Moebius m = Moebius::identity();
  for (int letter : w.letters()) {
    const auto g = static_cast<std::size_t>(std::abs(letter) - 1);
    if (g >= generators.size())
      throw std::invalid_argument("word_to_moebius: letter outside model rank");
    m = m * (letter > 0 ? generators[g] : generators[g].inverse());
  }
  return m;
}

double SurfaceModel::displacement(const ReducedWord& w) const {
  return hyp_distance(word_to_moebius(w).apply(base_point), base_point);
}

double SurfaceModel::max_generator_displacement() const {
  double m = 0.0;
  for (const auto& g : generators)
    m = std::max(m, hyp_distance(g.apply(base_point), base_point));
  return m;
}

void SurfaceModel::validate(int probe_length) const {
  for (const auto& g : generators)
    if (std::abs(g.mat.determinant() - 1.0) > 1e-12)
      throw NumericError("SurfaceModel: generator determinant != 1");

  // freeness probe via breadth-first products
  struct Node {
    Moebius m;
    int last;
  };
  std::vector<Node> frontier{{Moebius::identity(), 0}};
  for (int depth = 1; depth <= probe_length; ++depth) {
    std::vector<Node> next;
    next.reserve(frontier.size() * (2 * generators.size()));
    for (const auto& node : frontier) {
      for (int g = 1; g <= d; ++g) {
        for (int sign : {+1, -1}) {
          const int letter = sign * g;
          if (letter == -node.last) continue;
          Node child{node.m * (sign > 0 ? generators[static_cast<std::size_t>(g - 1)]
                                        : generators[static_cast<std::size_t>(g - 1)].inverse()),
                     letter};
          const double dist_plus = (child.m.mat - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
          const double dist_minus = (child.m.mat + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
          if (std::min(dist_plus, dist_minus) <= 1e-6)
            throw NumericError("SurfaceModel: relation found at word length " +
                               std::to_string(depth));
          next.push_back(std::move(child));
        }
      }
    }
    frontier.swap(next);
  }

  if (d >= 2) {
    // the commutator generates the cusp: parabolic, |tr| = 2, not ±Id
    const Moebius a = generators[0], b = generators[1];
    const Moebius comm = a * b * a.inverse() * b.inverse();
    if (std::abs(std::abs(comm.trace()) - 2.0) > 1e-9)
      throw NumericError("SurfaceModel: commutator is not parabolic");
  }
}

int LatticePointSet::max_word_length() const {
  int m = 0;
  for (const auto& p : elements) m = std::max<int>(m, static_cast<int>(p.word.length()));
  return m;
}

bool LatticePointSet::contains(const ReducedWord& w) const {
  for (const auto& p : elements)
    if (p.word == w) return true;
  return false;
}

LatticePointSet lattice_point_set(const SurfaceModel& model, double T, double kappa,
                                  double C_geo, double prune_slack, std::size_t budget) {
  if (T <= 0.0) throw std::invalid_argument("lattice_point_set: T must be positive");
  if (kappa <= 0.0 || kappa >= 1.0)
    throw std::invalid_argument("lattice_point_set: kappa must be in (0,1)");
  if (C_geo < 0.0) throw std::invalid_argument("lattice_point_set: C_geo must be >= 0");

  LatticePointSet out;
  out.T = T;
  out.kappa = kappa;
  out.radius_bound = 2.0 * (C_geo + std::log(1.0 / kappa) + T);
  out.prune_slack = prune_slack >= 0.0 ? prune_slack : 2.0 * model.max_generator_displacement();

  struct Node {
    ReducedWord word;
    Moebius m;
  };
  std::map<ReducedWord, double> kept;
  std::deque<Node> frontier;
  frontier.push_back({ReducedWord(), Moebius::identity()});
  kept.emplace(ReducedWord(), 0.0);
  std::size_t visited = 1;

  while (!frontier.empty()) {
    const Node node = std::move(frontier.front());
    frontier.pop_front();
    const int last = node.word.is_identity() ? 0 : node.word.letters().back();
    for (int g = 1; g <= model.d; ++g) {
      for (int sign : {+1, -1}) {
        const int letter = sign * g;
        if (letter == -last) continue;
        if (++visited > budget)
          throw BudgetExceeded("lattice_point_set: budget " + std::to_string(budget) +
                               " exceeded");
        Node child{mul(node.word, ReducedWord::generator(letter, model.d)),
                   node.m * (sign > 0 ? model.generators[static_cast<std::size_t>(g - 1)]
                                      : model.generators[static_cast<std::size_t>(g - 1)].inverse())};
        const double disp = hyp_distance(child.m.apply(model.base_point), model.base_point);
        if (disp <= out.radius_bound) kept.emplace(child.word, disp);
        if (disp <= out.radius_bound + out.prune_slack) frontier.push_back(std::move(child));
      }
    }
  }

  out.elements.reserve(kept.size());
  for (const auto& [w, disp] : kept) out.elements.push_back({w, disp});
  return out;
}

WordLengthReport word_length_bound_check(const LatticePointSet& lps) {
  WordLengthReport r;
  r.max_wl = lps.max_word_length();
  r.set_size = lps.size();
  r.max_wl_le_size = static_cast<std::size_t>(r.max_wl) <= lps.size();
  const double e2t = std::exp(2.0 * lps.T);
  const double k2 = lps.kappa * lps.kappa;
  r.env_statement_constant = r.max_wl / (k2 * e2t);
  r.env_proof_constant = r.max_wl / (e2t / k2);
  return r;
}

double cusp_region_height(double kappa, double C) {
  if (kappa <= 0.0 || kappa > 1.0)
    throw std::domain_error("cusp_region_height: kappa must be in (0,1]");
  return C / kappa;
}

double diam_K_bound(double kappa, double C) {
  if (kappa <= 0.0 || kappa > 1.0)
    throw std::domain_error("diam_K_bound: kappa must be in (0,1]");
  return C + std::log(1.0 / kappa);
}

nlohmann::json SurfaceModel::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["d"] = d;
  j["base_point"] = {base_point.real(), base_point.imag()};
  j["cusp_constant"] = cusp_constant;
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generators)
    gens.push_back({{g.mat(0, 0), g.mat(0, 1)}, {g.mat(1, 0), g.mat(1, 1)}});
  j["generators"] = std::move(gens);
  return j;
}

SurfaceModel SurfaceModel::from_json(const nlohmann::json& j) {
  SurfaceModel m;
  m.name = j.value("name", "custom");
  m.cusp_constant = j.value("cusp_constant", 1.0);
  const auto bp = j.at("base_point");
  m.base_point = {bp[0].get<double>(), bp[1].get<double>()};
  for (const auto& g : j.at("generators")) {
    Moebius mb;
    mb.mat << g[0][0].get<double>(), g[0][1].get<double>(), g[1][0].get<double>(),
        g[1][1].get<double>();
    m.generators.push_back(mb);
  }
  m.d = static_cast<int>(m.generators.size());
  m.validate();
  return m;
}

}  // namespace specgap
