#include "specgap/representations.hpp"

#include <numeric>
#include <stdexcept>

namespace specgap {

const char* flavor_name(Flavor f) {
  return f == Flavor::permutation ? "permutation" : "unitary";
}

Flavor flavor_from_name(const std::string& name) {
  if (name == "permutation") return Flavor::permutation;
  if (name == "unitary") return Flavor::unitary;
  throw std::invalid_argument("unknown flavor: " + name);
}

std::vector<int> uniform_permutation(int n, SplitMix64& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

Eigen::MatrixXcd haar_unitary(int n, SplitMix64& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      g(i, j) = std::complex<double>(rng.next_normal(), rng.next_normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // phase normalization Q <- Q diag(r_ii/|r_ii|): makes the distribution Haar
  for (int i = 0; i < n; ++i) {
    const std::complex<double> rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= (a > 0) ? rii / a : std::complex<double>(1.0, 0.0);
  }
  return q;
}

RepresentationSample sample(Flavor flavor, int n, int d, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample: dimension n must be >= 2");
  if (d < 1) throw std::invalid_argument("sample: rank d must be >= 1");
  RepresentationSample rep;
  rep.flavor = flavor;
  rep.n = n;
  rep.d = d;
  rep.seed = seed;
  for (int i = 0; i < d; ++i) {
    SplitMix64 gen(SplitMix64::derive(seed, static_cast<std::uint64_t>(i)));
    if (flavor == Flavor::permutation)
      rep.perms.push_back(uniform_permutation(n, gen));
    else
      rep.unitaries.push_back(haar_unitary(n, gen));
  }
  return rep;
}

Eigen::MatrixXcd RepresentationSample::image(int letter) const {
  const int g = std::abs(letter) - 1;
  if (letter == 0 || g >= d) throw std::invalid_argument("image: invalid letter");
  if (flavor == Flavor::permutation) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    const auto& p = perms[static_cast<std::size_t>(g)];
    for (int k = 0; k < n; ++k) {
      if (letter > 0)
        m(p[k], k) = 1.0;  // std_n: e_k -> e_{sigma(k)}
      else
        m(k, p[k]) = 1.0;
    }
    return m;
  }
  return letter > 0 ? unitaries[static_cast<std::size_t>(g)]
                    : unitaries[static_cast<std::size_t>(g)].adjoint();
}

Eigen::MatrixXcd evaluate(const RepresentationSample& rep, const ReducedWord& w) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(rep.n, rep.n);
  for (int letter : w.letters()) m = m * rep.image(letter);
  return m;
}

Eigen::MatrixXd zero_mean_projector(int n) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  p.array() -= 1.0 / n;
  return p;
}

Eigen::MatrixXcd restrict_zero_mean(const RepresentationSample& rep, const ReducedWord& w) {
  if (rep.flavor != Flavor::permutation)
    throw std::invalid_argument("restrict_zero_mean: permutation flavor only");
  const Eigen::MatrixXd p = zero_mean_projector(rep.n);
  return p * evaluate(rep, w) * p;
}

namespace {
int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}
}  // namespace

bool is_transitive(const RepresentationSample& rep) {
  if (rep.flavor != Flavor::permutation)
    throw std::invalid_argument("is_transitive: permutation flavor only");
  std::vector<int> parent(rep.n);
  std::iota(parent.begin(), parent.end(), 0);
  int components = rep.n;
  for (const auto& p : rep.perms) {
    for (int k = 0; k < rep.n; ++k) {
      const int a = uf_find(parent, k);
      const int b = uf_find(parent, p[k]);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  }
  return components == 1;
}

nlohmann::json RepresentationSample::to_json() const {
  nlohmann::json j;
  j["flavor"] = flavor_name(flavor);
  j["n"] = n;
  j["d"] = d;
  j["seed"] = seed;
  if (flavor == Flavor::permutation) j["permutations"] = perms;
  return j;
}

RepresentationSample RepresentationSample::from_json(const nlohmann::json& j) {
  const Flavor f = flavor_from_name(j.at("flavor").get<std::string>());
  const int n = j.at("n").get<int>();
  const int d = j.at("d").get<int>();
  const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
  if (f == Flavor::unitary || !j.contains("permutations"))
    return sample(f, n, d, seed);  // matrices reconstruct from the seed
  RepresentationSample rep;
  rep.flavor = f;
  rep.n = n;
  rep.d = d;
  rep.seed = seed;
  rep.perms = j.at("permutations").get<std::vector<std::vector<int>>>();
  return rep;
}

}  // namespace specgap
