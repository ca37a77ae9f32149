#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "specgap/certificate.hpp"
#include "specgap/harness.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("SPECGAP_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("specgap_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("rate-table: CSV matches the module to full precision") {
  const fs::path out = fresh_dir("rate");
  REQUIRE(run_cli("--subcommand rate-table --out " + out.string()) == 0);

  std::ifstream csv(out / "rate_table.csv");
  std::string line;
  std::getline(csv, line);  // config hash comment
  std::getline(csv, line);  // header
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string flavor, n_s, t_s, kappa_s, smin_s, gap_s;
    std::getline(ss, flavor, ',');
    std::getline(ss, n_s, ',');
    std::getline(ss, t_s, ',');
    std::getline(ss, kappa_s, ',');
    std::getline(ss, smin_s, ',');
    std::getline(ss, gap_s, ',');
    const auto rs = specgap::rate_schedule(specgap::cert_flavor_from_name(flavor),
                                           std::stod(n_s), 2);
    CHECK(std::stod(kappa_s) == rs.kappa);  // full precision via %.17g round trip
    CHECK(std::stod(t_s) == rs.T);
    ++rows;
  }
  CHECK(rows == 6);
}

TEST_CASE("certify-toy: byte-identical CSV on rerun with the same seed") {
  const fs::path out1 = fresh_dir("toy1");
  const fs::path out2 = fresh_dir("toy2");
  const std::string args = "--subcommand certify-toy --seed 5 ";
  REQUIRE(run_cli(args + "--out " + out1.string()) == 0);
  REQUIRE(run_cli(args + "--out " + out2.string()) == 0);
  CHECK(slurp(out1 / "certify_toy.csv") == slurp(out2 / "certify_toy.csv"));
  CHECK(slurp(out1 / "certificate_report.json") == slurp(out2 / "certificate_report.json"));
}

TEST_CASE("linearize-verify: small config run passes with residuals under the cap") {
  const fs::path out = fresh_dir("lin");
  const fs::path cfg = fs::temp_directory_path() / "specgap_lin_config.json";
  {
    std::ofstream f(cfg);
    f << R"({"cases": 12, "n_max": 6})";
  }
  REQUIRE(run_cli("--subcommand linearize-verify --config " + cfg.string() + " --out " +
                  out.string() + " --threads 2") == 0);

  std::ifstream csv(out / "linearize_verify.csv");
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto pos = line.rfind(',');
    CHECK(std::stod(line.substr(pos + 1)) <= 1e-7);
    ++rows;
  }
  CHECK(rows == 12);
}

TEST_CASE("manifest carries config hash and seed") {
  const fs::path out = fresh_dir("manifest");
  REQUIRE(run_cli("--subcommand rate-table --out " + out.string()) == 0);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.at("subcommand") == "rate-table");
  CHECK(manifest.at("assertion_failures").empty());
  CHECK(manifest.at("config_hash") ==
        specgap::harness::config_hash(manifest.at("config")));
}

TEST_CASE("error paths exit nonzero") {
  CHECK(run_cli("--subcommand no-such-thing --out /tmp/specgap_nst") != 0);
  CHECK(run_cli("--subcommand rate-table --config /no/such/file.json --out /tmp/specgap_ncf") != 0);
  CHECK(run_cli("") != 0);  // --subcommand is required
}
