#pragma once

// Flat key=value config files for the simulate-* commands.
//
//   situation   = one-prop | two-prop | mean
//   scenario_id = free-form label used in the CSV output
//   truth_a, truth_p, width, pi, cri_level, baseline, data_sd = numbers
//   rule        = probability-threshold | cri-inclusion
//   n_grid      = comma list (10,20,50) or range lo:hi:step (10:1000:10)
//   n_sims, mc_draws, seed, workers = integers
//   prior       = jeffreys | uniform | <a>,<b>       (proportion situations)
//   prior_mu0   = truth | <number>                   (mean situation)
//   prior_kappa0, prior_nu0, prior_sigma02 = numbers (mean situation)
//
// Lines starting with '#' and blank lines are ignored. Unknown keys are
// rejected.

#include <cstdint>
#include <string>

#include "twoit/simulation.hpp"

namespace twoit::cli {

struct SimulationConfig {
    ScenarioGrid grid;
    int workers = 0;  // 0 = all hardware threads
};

SimulationConfig parse_simulation_config(const std::string& text);
SimulationConfig load_simulation_config(const std::string& path);

// The config echoed back for run manifests.
std::string config_echo(const SimulationConfig& config);

}  // namespace twoit::cli
