#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "specgap/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"specgap: spectral-gap certificate laboratory"};
  specgap::harness::Options opt;
  std::uint64_t seed = 0;

  app.add_option("--subcommand", opt.subcommand,
                 "one of: norm-ratio, linearize-verify, kernel-check, lattice-grow, "
                 "rate-table, certify-toy")
      ->required();
  app.add_option("--config", opt.config_path, "JSON config file (defaults built in)");
  app.add_option("--out", opt.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "master seed override");
  app.add_option("--threads", opt.threads, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);
  opt.seed = seed;
  opt.seed_given = seed_opt->count() > 0;
  return specgap::harness::run(opt);
}
