#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlspike/channel.hpp"
#include "nlspike/prior.hpp"

namespace nlspike {

/// Parsed and validated experiment description. All experiments sweep a
/// gamma0 grid; the empirical ones additionally sweep seeds at fixed n.
struct SweepConfig {
  std::string experiment;  // fisher-info | se-curve | mmse-curve |
                           // mse-sweep | eigengap-sweep | amp-run
  std::string channel_name;
  std::string prior_name;
  double delta = 0.25;  // gaussian_additive: noise at gamma0 = 1
  int kf = 1;           // gaussian_additive: signal order
  double nu = 4.1;      // student_f0 tail index
  int n = 1000;
  std::vector<double> gamma0_grid;
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 1;
  int amp_t_max = 200;
  double amp_stop_tol = 1e-7;
  int k_max = 8;            // fisher-info scan depth
  long mc_samples = 1000000;  // fisher-info sample count
  int n_workers = 1;
};

/// Builds the config from JSON, applying per-experiment requirements
/// (throws std::runtime_error with a readable message on any violation,
/// including unknown keys).
SweepConfig parse_config(const nlohmann::json& j, const std::string& experiment);

/// Channel factory for one grid point of the sweep.
Channel channel_at(const SweepConfig& cfg, double gamma0);

/// Prior named in the config (or the channel's natural default).
DiscretePrior prior_for(const SweepConfig& cfg);

/// FNV-1a 64-bit over the canonical (sorted-key) JSON dump.
std::uint64_t config_hash(const nlohmann::json& j);

/// Runs the experiment, writing CSV (or JSON for fisher-info) to `out` and
/// per-cell failure notes to `err`. Returns 0 on full success, 2 when some
/// cells failed (successful rows are still written), 1 when nothing could be
/// produced.
int run_experiment(const SweepConfig& cfg, const nlohmann::json& original, std::ostream& out,
                   std::ostream& err);

/// "%.17g" formatting used for every floating-point cell (round-trip exact).
std::string fmt_num(double v);

}  // namespace nlspike
