#include "tippetop/scenario.hpp"

#include <cmath>
#include <fstream>
#include <utility>

namespace tippetop {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx + " must be an object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(ctx + ": unknown field \"" + it.key() + "\"");
  }
}

double get_num(const json& j, const char* key, double dflt, const std::string& ctx) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number()) fail(ctx + "." + key + " must be a number");
  return j.at(key).get<double>();
}

double require_num(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) fail(ctx + "." + key + " is required");
  if (!j.at(key).is_number()) fail(ctx + "." + key + " must be a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int dflt, const std::string& ctx) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number_integer()) fail(ctx + "." + key + " must be an integer");
  return j.at(key).get<int>();
}

bool get_bool(const json& j, const char* key, bool dflt, const std::string& ctx) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) fail(ctx + "." + key + " must be a boolean");
  return j.at(key).get<bool>();
}

Vec3 require_vec3(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) fail(ctx + "." + key + " is required");
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) fail(ctx + "." + key + " must be an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number())
      fail(ctx + "." + key + " must be an array of 3 numbers");
    out[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
  return out;
}

BodyParams parse_params(const json& j) {
  require_object(j, "params");
  check_keys(j,
             {"m", "R", "g", "a", "i1", "i3", "mu", "mu_r", "mu_s", "dimensionless", "eps_slip",
              "tol_geom"},
             "params");
  BodyParams p;
  p.m = get_num(j, "m", p.m, "params");
  p.R = get_num(j, "R", p.R, "params");
  p.g = get_num(j, "g", p.g, "params");
  p.a = get_num(j, "a", p.a, "params");
  p.i1 = get_num(j, "i1", p.i1, "params");
  p.i3 = get_num(j, "i3", p.i3, "params");
  p.mu = get_num(j, "mu", p.mu, "params");
  p.mu_r = get_num(j, "mu_r", p.mu_r, "params");
  p.mu_s = get_num(j, "mu_s", p.mu_s, "params");
  p.eps_slip = get_num(j, "eps_slip", p.eps_slip, "params");
  p.tol_geom = get_num(j, "tol_geom", p.tol_geom, "params");
  p.dimensionless = get_bool(j, "dimensionless", false, "params");
  try {
    if (p.dimensionless) {
      if (!unit_scaled(p))
        fail("params.dimensionless is true but m, R, g are not all 1");
      p.validate();
    } else {
      p.validate();
      p = nondimensionalize(p);
    }
  } catch (const std::invalid_argument& e) {
    fail(std::string("params: ") + e.what());
  }
  return p;
}

const std::pair<const char*, FrictionKind> kKindNames[] = {
    {"smooth", FrictionKind::Smooth},
    {"viscous_sliding", FrictionKind::ViscousSliding},
    {"dry_sliding", FrictionKind::DrySliding},
    {"contact_torque", FrictionKind::ContactTorque},
    {"anisotropic_axis", FrictionKind::AnisotropicAxis},
    {"rolling_resistance", FrictionKind::RollingResistance},
    {"spinning_resistance", FrictionKind::SpinningResistance},
    {"composite", FrictionKind::Composite},
};

FrictionKind parse_kind(const std::string& name, const std::string& ctx) {
  for (const auto& [n, k] : kKindNames)
    if (name == n) return k;
  fail(ctx + ": unknown friction kind \"" + name + "\"");
}

GridSpec parse_grid(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  check_keys(j, {"min", "max", "count"}, ctx);
  GridSpec g;
  g.min = require_num(j, "min", ctx);
  g.max = require_num(j, "max", ctx);
  g.count = get_int(j, "count", -1, ctx);
  if (g.count < 0) fail(ctx + ".count is required and must be >= 0");
  return g;
}

IntegratorConfig parse_integrator(const json& j) {
  require_object(j, "integrator");
  check_keys(j,
             {"rtol", "atol", "dt_init", "dt_min", "dt_max", "t_end", "renormalize_gamma",
              "steady_state_eps", "stride"},
             "integrator");
  IntegratorConfig c;
  c.rtol = get_num(j, "rtol", c.rtol, "integrator");
  c.atol = get_num(j, "atol", c.atol, "integrator");
  c.dt_init = get_num(j, "dt_init", c.dt_init, "integrator");
  c.dt_min = get_num(j, "dt_min", c.dt_min, "integrator");
  c.dt_max = get_num(j, "dt_max", c.dt_max, "integrator");
  c.t_end = get_num(j, "t_end", c.t_end, "integrator");
  c.steady_state_eps = get_num(j, "steady_state_eps", c.steady_state_eps, "integrator");
  c.renormalize_gamma = get_bool(j, "renormalize_gamma", c.renormalize_gamma, "integrator");
  c.stride = get_int(j, "stride", c.stride, "integrator");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("integrator: ") + e.what());
  }
  return c;
}

bool torque_only_reducible(const FrictionModel& m) {
  if (m.kind == FrictionKind::RollingResistance || m.kind == FrictionKind::SpinningResistance)
    return true;
  if (m.kind != FrictionKind::Composite) return false;
  for (const auto& part : m.parts)
    if (part.kind != FrictionKind::RollingResistance &&
        part.kind != FrictionKind::SpinningResistance)
      return false;
  return true;
}

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  if (count == 1) {
    pts.push_back(min);
  } else {
    for (int i = 0; i < count; ++i)
      pts.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return pts;
}

FrictionModel parse_friction_model(const nlohmann::json& node) {
  require_object(node, "model");
  check_keys(node, {"kind", "parts"}, "model");
  if (!node.contains("kind") || !node.at("kind").is_string())
    fail("model.kind is required and must be a string");
  const FrictionKind kind = parse_kind(node.at("kind").get<std::string>(), "model.kind");
  if (kind != FrictionKind::Composite) {
    if (node.contains("parts")) fail("model.parts is only valid for kind \"composite\"");
    return FrictionModel{kind, {}};
  }
  if (!node.contains("parts") || !node.at("parts").is_array() || node.at("parts").empty())
    fail("model.parts must be a non-empty array for kind \"composite\"");
  std::vector<FrictionModel> parts;
  for (const auto& part : node.at("parts")) {
    if (!part.is_string()) fail("model.parts entries must be friction-kind strings");
    const FrictionKind pk = parse_kind(part.get<std::string>(), "model.parts");
    if (pk == FrictionKind::Composite) fail("model.parts must not nest composites");
    parts.push_back(FrictionModel{pk, {}});
  }
  return FrictionModel::composite(std::move(parts));
}

std::string friction_kind_name(FrictionKind kind) {
  for (const auto& [n, k] : kKindNames)
    if (k == kind) return n;
  return "unknown";
}

Scenario parse_scenario(const nlohmann::json& doc) {
  require_object(doc, "scenario");
  check_keys(doc, {"params", "model", "initial", "integrator", "scan", "smale", "portrait",
                   "check"},
             "scenario");
  if (!doc.contains("params")) fail("scenario: params is required");

  Scenario sc;
  sc.params = parse_params(doc.at("params"));
  if (doc.contains("model")) sc.model = parse_friction_model(doc.at("model"));
  if (doc.contains("integrator")) sc.integrator = parse_integrator(doc.at("integrator"));

  if (doc.contains("initial")) {
    const json& j = doc.at("initial");
    require_object(j, "initial");
    check_keys(j, {"full", "reduced"}, "initial");
    if (j.contains("full") == j.contains("reduced"))
      fail("initial: exactly one of \"full\" or \"reduced\" must be given");

    if (j.contains("full")) {
      const json& f = j.at("full");
      require_object(f, "initial.full");
      check_keys(f, {"v", "omega", "gamma", "project_velocity"}, "initial.full");
      FullState s;
      s.v = f.contains("v") ? require_vec3(f, "v", "initial.full") : Vec3::Zero();
      s.omega = require_vec3(f, "omega", "initial.full");
      s.gamma = require_vec3(f, "gamma", "initial.full");
      const double n = s.gamma.norm();
      if (std::abs(n - 1.0) > 1e-6)
        fail("initial.full.gamma must be a unit vector (|gamma| = " + std::to_string(n) + ")");
      s.gamma /= n;
      const double res = constraint_residuals(s, sc.params).contact;
      if (get_bool(f, "project_velocity", false, "initial.full")) {
        s.v -= res * s.gamma;
      } else if (std::abs(res) > 1e-8) {
        fail("initial.full violates the rolling constraint (residual " + std::to_string(res) +
             "); set initial.full.project_velocity to project it out");
      }
      sc.initial_full = s;
    } else {
      const json& r = j.at("reduced");
      require_object(r, "initial.reduced");
      check_keys(r, {"gamma3", "K1", "K2", "C", "phi"}, "initial.reduced");
      ReducedState rs;
      rs.gamma3 = require_num(r, "gamma3", "initial.reduced");
      rs.K1 = require_num(r, "K1", "initial.reduced");
      rs.K2 = require_num(r, "K2", "initial.reduced");
      rs.C = require_num(r, "C", "initial.reduced");
      rs.phi = get_num(r, "phi", 0.0, "initial.reduced");
      if (std::abs(rs.gamma3) > 1.0 - kPoleSwitch)
        fail("initial.reduced.gamma3 is too close to the poles; use initial.full");
      if (sc.model && !torque_only_reducible(*sc.model))
        fail("initial.reduced requires a torque-only model (rolling_resistance, "
             "spinning_resistance, or their composite)");
      sc.initial_reduced = rs;
    }
  }

  if (doc.contains("scan")) {
    const json& j = doc.at("scan");
    require_object(j, "scan");
    check_keys(j, {"C", "c1"}, "scan");
    ScanSpec spec;
    if (j.contains("C")) spec.C = parse_grid(j.at("C"), "scan.C");
    if (j.contains("c1")) spec.c1 = parse_grid(j.at("c1"), "scan.c1");
    if (!spec.C && !spec.c1) fail("scan: at least one of C or c1 grids is required");
    sc.scan = spec;
  }

  if (doc.contains("smale")) {
    const json& j = doc.at("smale");
    require_object(j, "smale");
    check_keys(j, {"C", "c1"}, "smale");
    SmaleSpec spec;
    if (!j.contains("C")) fail("smale.C grid is required");
    spec.C = parse_grid(j.at("C"), "smale.C");
    if (j.contains("c1")) spec.c1 = parse_grid(j.at("c1"), "smale.c1");
    sc.smale = spec;
  }

  if (doc.contains("portrait")) {
    const json& j = doc.at("portrait");
    require_object(j, "portrait");
    check_keys(j, {"K1", "C", "gamma3_0", "K2_0", "c1_curve"}, "portrait");
    PortraitSpec spec;
    if (!j.contains("K1")) fail("portrait.K1 grid is required");
    if (!j.contains("C")) fail("portrait.C grid is required");
    spec.K1 = parse_grid(j.at("K1"), "portrait.K1");
    spec.C = parse_grid(j.at("C"), "portrait.C");
    spec.gamma3_0 = get_num(j, "gamma3_0", 0.0, "portrait");
    spec.K2_0 = get_num(j, "K2_0", 0.0, "portrait");
    if (std::abs(spec.gamma3_0) > 1.0 - kPoleSwitch)
      fail("portrait.gamma3_0 is too close to the poles");
    if (j.contains("c1_curve")) spec.c1_curve = parse_grid(j.at("c1_curve"), "portrait.c1_curve");
    sc.portrait = spec;
  }

  if (doc.contains("check")) {
    const json& j = doc.at("check");
    require_object(j, "check");
    check_keys(j, {"states", "t_end", "drift_tol", "vary_tol"}, "check");
    CheckSpec spec;
    spec.states = get_int(j, "states", spec.states, "check");
    spec.t_end = get_num(j, "t_end", spec.t_end, "check");
    spec.drift_tol = get_num(j, "drift_tol", spec.drift_tol, "check");
    spec.vary_tol = get_num(j, "vary_tol", spec.vary_tol, "check");
    if (spec.states < 1) fail("check.states must be >= 1");
    if (!(spec.t_end > 0.0)) fail("check.t_end must be positive");
    if (!(spec.drift_tol > 0.0)) fail("check.drift_tol must be positive");
    if (!(spec.vary_tol > spec.drift_tol))
      fail("check.vary_tol must exceed check.drift_tol");
    sc.check = spec;
  }

  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail("scenario JSON parse error in " + path + ": " + e.what());
  }
  return parse_scenario(doc);
}

}  // namespace tippetop
