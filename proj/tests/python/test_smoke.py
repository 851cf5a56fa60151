"""Smoke tests: the bindings expose the core operations and agree with
values pinned in the C++ test suite."""

import math

import pytest

import tippetop as tt


def oblate_params():
    p = tt.BodyParams()
    p.a = 0.29
    p.i1 = 0.55
    p.i3 = 0.51
    p.mu_r = 1.0
    p.dimensionless = True
    return p


def test_critical_level_value():
    c = tt.critical_C(oblate_params())
    assert c == pytest.approx(1.3732170258192979, abs=1e-12)


def test_critical_level_absent_for_spherical_inertia():
    p = oblate_params()
    p.i1 = p.i3
    assert tt.critical_C(p) is None


def test_nondimensionalize_scales_geometry():
    p = tt.BodyParams()
    p.m, p.R, p.g = 2.0, 0.5, 9.81
    p.a, p.i1, p.i3 = 0.145, 0.275, 0.255
    q = tt.nondimensionalize(p)
    assert q.a == pytest.approx(0.29, abs=1e-15)
    assert q.i1 == pytest.approx(0.55, abs=1e-15)
    assert q.i3 == pytest.approx(0.51, abs=1e-15)
    assert q.dimensionless


def test_smooth_model_conserves_everything():
    p = oblate_params()
    s = tt.random_admissible_state(7, p)
    cfg = tt.IntegratorConfig()
    cfg.t_end = 5.0
    traj = tt.integrate_full(s, tt.FrictionModel.smooth(), p, cfg)
    assert traj.stop == tt.StopReason.ReachedTEnd
    iv0 = tt.evaluate_integrals(traj.states[0], tt.FrictionModel.smooth(), p)
    for st in traj.states:
        iv = tt.evaluate_integrals(st, tt.FrictionModel.smooth(), p)
        assert iv.E == pytest.approx(iv0.E, abs=1e-9)
        assert iv.G == pytest.approx(iv0.G, abs=1e-9)


def test_reduced_chart_roundtrip():
    p = oblate_params()
    s = tt.random_admissible_state(11, p)
    rs = tt.to_reduced(s.omega, s.gamma, p)
    omega, gamma = tt.from_reduced(rs, p)
    assert max(abs(omega[i] - s.omega[i]) for i in range(3)) < 1e-12
    assert max(abs(gamma[i] - s.gamma[i]) for i in range(3)) < 1e-12


def test_signature_rolling_resistance_keeps_area():
    p = oblate_params()
    p.mu = 0.3
    p.mu_s = 0.001
    sig = tt.conservation_signature(tt.FrictionModel.rolling_resistance(), p)
    assert sig == {tt.Integral.Area}
    sig = tt.conservation_signature(tt.FrictionModel.viscous_sliding(), p)
    assert sig == {tt.Integral.Jellett}


def test_vertical_verdicts_flip_at_critical_level():
    p = oblate_params()
    cstar = tt.critical_C(p)
    below = tt.hurwitz_vertical(tt.FamilyKind.SigmaL, 0.9 * cstar, p)
    above = tt.hurwitz_vertical(tt.FamilyKind.SigmaL, 1.1 * cstar, p)
    assert below.verdict == tt.Verdict.Stable
    assert above.verdict == tt.Verdict.Unstable


def test_validation_errors_surface_as_python_exceptions():
    p = oblate_params()
    p.i1 = -1.0
    with pytest.raises(ValueError):
        p.validate()
