#pragma once

#include "tippetop/scenario.hpp"

#include <cstdint>
#include <filesystem>

namespace tippetop {

struct CommandOptions {
  std::filesystem::path out = ".";
  int threads = 1;
  std::uint64_t seed = kSignatureSeed;
};

//! Integrates the scenario's initial state and writes trajectory.csv
//! (t, gamma1..3, omega1..3, E, F, G, C, res_constraint, res_norm) plus
//! summary.json (final state, convergence flag, drift maxima).
void cmd_simulate(const Scenario& sc, const CommandOptions& opt);

//! Classifies family members over the scenario grids and writes scan.csv
//! (family, parameter, gamma3, C, verdict, condition, det1..det4).
void cmd_stability_scan(const Scenario& sc, const CommandOptions& opt);

//! Writes the family curves on the (C^2, E) plane with stability flags to
//! smale.csv (family, parameter, C, C_squared, E, verdict).
void cmd_smale(const Scenario& sc, const CommandOptions& opt);

//! Integrates the reduced system from every (K1, C) grid point and writes
//! traj_NNN.csv files (t, K1, C, gamma3), the tilted-family overlay curve
//! sigma0_curve.csv (c1, K1, C), and summary.json.
void cmd_phase_portrait(const Scenario& sc, const CommandOptions& opt);

//! For every friction variant: structural conservation signature vs observed
//! trajectory drifts. Writes report.json; throws NumericalError on mismatch.
void cmd_conservation_check(const Scenario& sc, const CommandOptions& opt);

}  // namespace tippetop
