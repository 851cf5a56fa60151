#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tippetop/commands.hpp"
#include "tippetop/dynamics.hpp"
#include "tippetop/equilibria.hpp"
#include "tippetop/friction.hpp"
#include "tippetop/integrals.hpp"
#include "tippetop/integrate.hpp"
#include "tippetop/reduction.hpp"
#include "tippetop/scenario.hpp"
#include "tippetop/types.hpp"

#include <random>

namespace py = pybind11;
using namespace tippetop;

PYBIND11_MODULE(_core, m) {
  m.doc() = "rolling/sliding unbalanced-ball dynamics core";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<BodyParams>(m, "BodyParams")
      .def(py::init<>())
      .def_readwrite("m", &BodyParams::m)
      .def_readwrite("R", &BodyParams::R)
      .def_readwrite("a", &BodyParams::a)
      .def_readwrite("i1", &BodyParams::i1)
      .def_readwrite("i3", &BodyParams::i3)
      .def_readwrite("g", &BodyParams::g)
      .def_readwrite("mu", &BodyParams::mu)
      .def_readwrite("mu_r", &BodyParams::mu_r)
      .def_readwrite("mu_s", &BodyParams::mu_s)
      .def_readwrite("dimensionless", &BodyParams::dimensionless)
      .def_readwrite("eps_slip", &BodyParams::eps_slip)
      .def_readwrite("tol_geom", &BodyParams::tol_geom)
      .def("validate", &BodyParams::validate);
  m.def("nondimensionalize", &nondimensionalize, py::arg("p"));
  m.def("unit_scaled", &unit_scaled, py::arg("p"));
  m.def("axis_offset", &axis_offset, py::arg("p"));
  m.def("contact_vector", &contact_vector, py::arg("gamma"), py::arg("p"));

  py::enum_<FrictionKind>(m, "FrictionKind")
      .value("Smooth", FrictionKind::Smooth)
      .value("ViscousSliding", FrictionKind::ViscousSliding)
      .value("DrySliding", FrictionKind::DrySliding)
      .value("ContactTorque", FrictionKind::ContactTorque)
      .value("AnisotropicAxis", FrictionKind::AnisotropicAxis)
      .value("RollingResistance", FrictionKind::RollingResistance)
      .value("SpinningResistance", FrictionKind::SpinningResistance)
      .value("Composite", FrictionKind::Composite);

  py::class_<FrictionModel>(m, "FrictionModel")
      .def_readonly("kind", &FrictionModel::kind)
      .def_readonly("parts", &FrictionModel::parts)
      .def_static("smooth", &FrictionModel::smooth)
      .def_static("viscous_sliding", &FrictionModel::viscous_sliding)
      .def_static("dry_sliding", &FrictionModel::dry_sliding)
      .def_static("contact_torque", &FrictionModel::contact_torque)
      .def_static("anisotropic_axis", &FrictionModel::anisotropic_axis)
      .def_static("rolling_resistance", &FrictionModel::rolling_resistance)
      .def_static("spinning_resistance", &FrictionModel::spinning_resistance)
      .def_static("composite", &FrictionModel::composite, py::arg("parts"));

  py::class_<FullState>(m, "FullState")
      .def(py::init<>())
      .def_readwrite("v", &FullState::v)
      .def_readwrite("omega", &FullState::omega)
      .def_readwrite("gamma", &FullState::gamma);
  m.def("contact_velocity", &contact_velocity, py::arg("state"), py::arg("p"));
  m.def(
      "constraint_residuals",
      [](const FullState& s, const BodyParams& p) {
        const ConstraintResiduals r = constraint_residuals(s, p);
        return py::make_tuple(r.contact, r.unit);
      },
      py::arg("state"), py::arg("p"));
  m.def(
      "random_admissible_state",
      [](std::uint64_t seed, const BodyParams& p) {
        std::mt19937_64 rng(seed);
        return random_admissible_state(rng, p);
      },
      py::arg("seed"), py::arg("p"));

  m.def("normal_force",
        py::overload_cast<const FullState&, const Vec3&, const Vec3&, const BodyParams&>(
            &normal_force),
        py::arg("state"), py::arg("force"), py::arg("torque"), py::arg("p"));
  m.def(
      "resolve_friction",
      [](const FrictionModel& model, const FullState& s, const BodyParams& p) {
        const ResolvedFriction r = resolve_friction(model, s, p);
        return py::make_tuple(r.out.force, r.out.torque, r.N);
      },
      py::arg("model"), py::arg("state"), py::arg("p"),
      "returns (force, torque, normal_force)");
  m.def(
      "rhs_general",
      [](const FullState& s, const FrictionModel& model, const BodyParams& p) {
        const FullDerivative d = rhs_general(s, model, p);
        return py::make_tuple(d.dot.v, d.dot.omega, d.dot.gamma, d.N);
      },
      py::arg("state"), py::arg("model"), py::arg("p"),
      "returns (dv, domega, dgamma, normal_force)");
  m.def("rhs_decoupled", &rhs_decoupled, py::arg("omega"), py::arg("gamma"), py::arg("p"));
  m.def("rhs_decoupled_spinning", &rhs_decoupled_spinning, py::arg("omega"), py::arg("gamma"),
        py::arg("p"));

  py::class_<IntegralValues>(m, "IntegralValues")
      .def_readonly("E", &IntegralValues::E)
      .def_readonly("F", &IntegralValues::F)
      .def_readonly("G", &IntegralValues::G)
      .def_readonly("C", &IntegralValues::C)
      .def_readonly("dEdt", &IntegralValues::dEdt);
  m.def("evaluate_integrals", &evaluate_integrals, py::arg("state"), py::arg("model"),
        py::arg("p"));

  py::enum_<Integral>(m, "Integral")
      .value("Jellett", Integral::Jellett)
      .value("Lagrange", Integral::Lagrange)
      .value("Area", Integral::Area);
  m.def("conservation_signature", &conservation_signature, py::arg("model"), py::arg("p"),
        py::arg("sample_count") = 40, py::arg("seed") = kSignatureSeed);

  py::class_<ReducedState>(m, "ReducedState")
      .def(py::init<>())
      .def_readwrite("gamma3", &ReducedState::gamma3)
      .def_readwrite("K1", &ReducedState::K1)
      .def_readwrite("K2", &ReducedState::K2)
      .def_readwrite("C", &ReducedState::C)
      .def_readwrite("phi", &ReducedState::phi);
  m.def("chart_k", &chart_k, py::arg("gamma3"), py::arg("p"));
  m.def("to_reduced", &to_reduced, py::arg("omega"), py::arg("gamma"), py::arg("p"));
  m.def("from_reduced", &from_reduced, py::arg("reduced"), py::arg("p"),
        "returns (omega, gamma)");
  m.def("rhs_reduced", &rhs_reduced, py::arg("reduced"), py::arg("p"));
  m.def("rhs_phi", &rhs_phi, py::arg("reduced"), py::arg("p"));
  m.def("rhs_reduced_spinning", &rhs_reduced_spinning, py::arg("reduced"), py::arg("p"));

  py::enum_<FamilyKind>(m, "FamilyKind")
      .value("SigmaU", FamilyKind::SigmaU)
      .value("SigmaL", FamilyKind::SigmaL)
      .value("Sigma0", FamilyKind::Sigma0);
  py::class_<EquilibriumFamily>(m, "EquilibriumFamily")
      .def_readonly("kind", &EquilibriumFamily::kind)
      .def_readonly("parameter", &EquilibriumFamily::parameter)
      .def_readonly("gamma3", &EquilibriumFamily::gamma3)
      .def_readonly("K1", &EquilibriumFamily::K1)
      .def_readonly("K2", &EquilibriumFamily::K2)
      .def_readonly("omega", &EquilibriumFamily::omega)
      .def_readonly("gamma", &EquilibriumFamily::gamma)
      .def_readonly("C", &EquilibriumFamily::C)
      .def_readonly("energy", &EquilibriumFamily::energy);
  m.def("critical_C", &critical_C, py::arg("p"));
  m.def("sigma0_min_spin", &sigma0_min_spin, py::arg("p"));
  m.def(
      "sigma0_coords",
      [](double c1, const BodyParams& p) {
        const Sigma0Coords c = sigma0_coords(c1, p);
        return py::make_tuple(c.gamma3, c.K1, c.C);
      },
      py::arg("c1"), py::arg("p"), "returns (gamma3, K1, C)");
  m.def("vertical_family", &vertical_family, py::arg("which"), py::arg("C"), py::arg("p"));
  m.def("sigma0_family", &sigma0_family, py::arg("c1"), py::arg("p"));
  m.def("c1_from_area_integral", &c1_from_area_integral, py::arg("C"), py::arg("p"));
  m.def("family_energy", &family_energy, py::arg("family"), py::arg("parameter"), py::arg("p"));

  py::enum_<Verdict>(m, "Verdict")
      .value("Stable", Verdict::Stable)
      .value("Unstable", Verdict::Unstable)
      .value("Marginal", Verdict::Marginal);
  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("kind", &StabilityReport::kind)
      .def_readonly("parameter", &StabilityReport::parameter)
      .def_readonly("coefficients", &StabilityReport::coefficients)
      .def_readonly("conditions", &StabilityReport::conditions)
      .def_readonly("eigenvalues", &StabilityReport::eigenvalues)
      .def_readonly("verdict", &StabilityReport::verdict)
      .def_readonly("condition", &StabilityReport::condition);
  m.def("hurwitz_vertical", &hurwitz_vertical, py::arg("which"), py::arg("C"), py::arg("p"));
  m.def("sigma0_characteristic", &sigma0_characteristic, py::arg("c1"), py::arg("p"));

  py::class_<Linearization>(m, "Linearization")
      .def_readonly("jacobian", &Linearization::jacobian)
      .def_readonly("eigenvalues", &Linearization::eigenvalues)
      .def_readonly("transverse_characteristic", &Linearization::transverse_characteristic)
      .def_readonly("zero_count", &Linearization::zero_count);
  m.def("linearize_full", &linearize_full, py::arg("at"), py::arg("p"));

  py::class_<IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init<>())
      .def_readwrite("rtol", &IntegratorConfig::rtol)
      .def_readwrite("atol", &IntegratorConfig::atol)
      .def_readwrite("dt_init", &IntegratorConfig::dt_init)
      .def_readwrite("dt_min", &IntegratorConfig::dt_min)
      .def_readwrite("dt_max", &IntegratorConfig::dt_max)
      .def_readwrite("t_end", &IntegratorConfig::t_end)
      .def_readwrite("renormalize_gamma", &IntegratorConfig::renormalize_gamma)
      .def_readwrite("steady_state_eps", &IntegratorConfig::steady_state_eps)
      .def_readwrite("stride", &IntegratorConfig::stride);
  py::enum_<StopReason>(m, "StopReason")
      .value("ReachedTEnd", StopReason::ReachedTEnd)
      .value("Converged", StopReason::Converged)
      .value("StepUnderflow", StopReason::StepUnderflow)
      .value("Halted", StopReason::Halted);

  py::class_<FullTrajectory>(m, "FullTrajectory")
      .def_readonly("t", &FullTrajectory::t)
      .def_readonly("states", &FullTrajectory::states)
      .def_readonly("N", &FullTrajectory::N)
      .def_readonly("stop", &FullTrajectory::stop)
      .def_readonly("accepted", &FullTrajectory::accepted)
      .def_readonly("rejected", &FullTrajectory::rejected)
      .def_readonly("min_N", &FullTrajectory::min_N);
  m.def("integrate_full", &integrate_full, py::arg("state"), py::arg("model"), py::arg("p"),
        py::arg("config"), py::arg("t_eval") = std::vector<double>{});

  py::class_<DecoupledTrajectory>(m, "DecoupledTrajectory")
      .def_readonly("t", &DecoupledTrajectory::t)
      .def_readonly("omega", &DecoupledTrajectory::omega)
      .def_readonly("gamma", &DecoupledTrajectory::gamma)
      .def_readonly("stop", &DecoupledTrajectory::stop)
      .def_readonly("accepted", &DecoupledTrajectory::accepted)
      .def_readonly("rejected", &DecoupledTrajectory::rejected);
  m.def("integrate_decoupled", &integrate_decoupled, py::arg("omega0"), py::arg("gamma0"),
        py::arg("p"), py::arg("config"), py::arg("spinning") = false,
        py::arg("t_eval") = std::vector<double>{});

  py::class_<ReducedTrajectory>(m, "ReducedTrajectory")
      .def_readonly("t", &ReducedTrajectory::t)
      .def_readonly("states", &ReducedTrajectory::states)
      .def_readonly("omega", &ReducedTrajectory::omega)
      .def_readonly("gamma", &ReducedTrajectory::gamma)
      .def_readonly("stop", &ReducedTrajectory::stop)
      .def_readonly("accepted", &ReducedTrajectory::accepted)
      .def_readonly("rejected", &ReducedTrajectory::rejected)
      .def_readonly("event_times", &ReducedTrajectory::event_times)
      .def_readonly("fallback_used", &ReducedTrajectory::fallback_used);
  m.def("integrate_reduced", &integrate_reduced, py::arg("state"), py::arg("p"),
        py::arg("config"), py::arg("spinning") = false,
        py::arg("event_C_threshold") = std::optional<double>{},
        py::arg("t_eval") = std::vector<double>{});

  m.attr("SIGNATURE_SEED") = py::int_(kSignatureSeed);
  m.attr("EPS_POLE") = py::float_(kEpsPole);
  m.attr("POLE_SWITCH") = py::float_(kPoleSwitch);
  m.attr("MARGIN_BAND") = py::float_(kMarginBand);
}
