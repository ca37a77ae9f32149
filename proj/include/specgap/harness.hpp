#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace specgap::harness {

struct Options {
  std::string subcommand;
  std::string config_path;  // empty: built-in defaults
  std::string out_dir = "specgap-out";
  std::uint64_t seed = 0;
  bool seed_given = false;  // --seed overrides the config seed only when set
  int threads = 0;          // 0: hardware concurrency
};

/// Runs one subcommand (norm-ratio, linearize-verify, kernel-check,
/// lattice-grow, rate-table, certify-toy). Writes CSV artifacts plus a JSON
/// manifest into out_dir. Returns 0 iff every in-run assertion passed.
int run(const Options& opt);

nlohmann::json default_config(const std::string& subcommand);
std::uint64_t config_hash(const nlohmann::json& config);

/// deterministic float formatting used in all CSV output
std::string fmt(double v);

}  // namespace specgap::harness
