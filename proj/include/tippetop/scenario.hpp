#pragma once

#include "tippetop/friction.hpp"
#include "tippetop/integrate.hpp"
#include "tippetop/reduction.hpp"
#include "tippetop/types.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace tippetop {

//! Scenario-file problem; the message names the offending field.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

//! Uniform grid: count points from min to max inclusive (count == 1 -> min).
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  std::vector<double> points() const;
};

//! stability-scan request: C grid for the vertical families and/or c1 grid
//! for the tilted one.
struct ScanSpec {
  std::optional<GridSpec> C;
  std::optional<GridSpec> c1;
};

//! smale request: vertical-family parabolas over the C grid, tilted curve
//! over the c1 grid (skipped where the family does not exist).
struct SmaleSpec {
  GridSpec C;
  std::optional<GridSpec> c1;
};

//! phase-portrait request: one reduced trajectory per (K1, C) grid point,
//! all starting from (gamma3_0, K2_0), plus the tilted-family overlay curve.
struct PortraitSpec {
  GridSpec K1;
  GridSpec C;
  double gamma3_0 = 0.0;
  double K2_0 = 0.0;
  std::optional<GridSpec> c1_curve;
};

//! conservation-check request: per-model trajectory drift thresholds.
struct CheckSpec {
  int states = 3;           //!< random admissible initial states per model
  double t_end = 20.0;      //!< horizon of each drift trajectory
  double drift_tol = 1e-8;  //!< max drift for an integral to count as conserved
  double vary_tol = 1e-3;   //!< min drift somewhere for a non-conserved one
};

//! Parsed and validated scenario. params are already dimensionless (inputs
//! with dimensionless=false are rescaled on load); a full initial state has
//! been constraint-checked (or projected when requested).
struct Scenario {
  BodyParams params;
  std::optional<FrictionModel> model;
  std::optional<FullState> initial_full;
  std::optional<ReducedState> initial_reduced;
  IntegratorConfig integrator;
  std::optional<ScanSpec> scan;
  std::optional<SmaleSpec> smale;
  std::optional<PortraitSpec> portrait;
  CheckSpec check;
};

//! Parses a scenario document. Throws ValidationError on malformed or
//! inconsistent input, naming the field.
Scenario parse_scenario(const nlohmann::json& doc);

//! Reads and parses a scenario file.
Scenario load_scenario(const std::string& path);

//! snake_case name <-> friction model (Composite carries its parts).
FrictionModel parse_friction_model(const nlohmann::json& node);
std::string friction_kind_name(FrictionKind kind);

}  // namespace tippetop
