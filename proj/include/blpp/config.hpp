#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blpp/grid.hpp"

namespace blpp {

// Run configuration shared by the CLI commands and the verification suite.
// Persisted as diff-able `key = value` text with [section] headers.
struct RunConfig {
  FieldSpec field{0, 400, -50.0, 560.0, 0.05, 7};

  std::vector<double> thetas{0.6, 1.0, 1.6};
  double gamma = 0.8;
  double delta_dir = 1.2;
  double eta_factor = 0.05;  // surrogate offset: gamma*(1-eta), delta*(1+eta)

  double tol = 1e-9;
  double eps_factor = 3.0;  // shock gap threshold: eps_factor * sqrt(delta)
  int match_radius = 2;
  double band_factor = 0.5;  // cif band: band_factor * (delta_eff - gamma_eff)
  int iso_gap = 1;

  std::vector<int> horizons{100, 200, 400};
  double probe_time_frac = 0.5;
  double probe_level_frac = 0.25;

  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string out_dir = "out";
  bool smoke = false;

  double gamma_low() const { return gamma * (1.0 - eta_factor); }
  double delta_high() const { return delta_dir * (1.0 + eta_factor); }

  void validate() const;
};

RunConfig parse_config_file(const std::string& path, RunConfig base = {});
void apply_config_line(RunConfig& config, const std::string& section, const std::string& key,
                       const std::string& value);
std::string dump_config(const RunConfig& config);

}  // namespace blpp
