import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from kdicke.errors import OutOfDomainError
from kdicke.meanfield import (AngleSet, dicke_mf_observables, gamma_critical, gamma_cutoff,
                              mf_critical, mf_energy_surface, mf_observables)
from kdicke.model import ModelParams
from kdicke.variational import coherent_state
from kdicke.spin_algebra import SpinRep

K1 = ModelParams(k=1)


def _grad(f, x, h=1e-6):
    x = np.asarray(x, float)
    out = []
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        out.append((f(x + e) - f(x - e)) / (2 * h))
    return np.array(out)


def _hess(f, x, h=1e-4):
    x = np.asarray(x, float)
    n = len(x)
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ei, ej = np.eye(n)[i] * h, np.eye(n)[j] * h
            m[i, j] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * h * h)
    return m


def test_angle_ranges():
    AngleSet(0, 0, 0, 0)
    for bad in [(math.pi, 0, 0, 0), (0, 2 * math.pi, 0, 0), (-0.1, 0, 0, 0), (0, 0, math.nan, 0)]:
        with pytest.raises(ValueError):
            AngleSet(*bad)


@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(-20, 20), st.floats(-20, 20))
def test_wrapped_is_same_coherent_state(t, f, p, v):
    a = AngleSet.wrapped(t, f, p, v)
    rep = SpinRep(4)
    for (x, y), (x2, y2) in (((t, f), (a.theta, a.phi)), ((p, v), (a.psi, a.varphi))):
        u, w = coherent_state(rep, x, y), coherent_state(rep, x2, y2)
        assert abs(abs(np.vdot(u, w)) - 1) < 1e-9


def test_north_pole_energy():
    assert mf_energy_surface(AngleSet(0, 0, 0, 0), K1) == -8.0


def test_equator_energy_hand_value():
    e = mf_energy_surface((math.pi / 2, 0, math.pi / 2, 0), K1.with_gamma(0.51))
    assert e == pytest.approx(1.5 - 3.06, abs=1e-12)


def test_critical_couplings_k1():
    assert gamma_critical(K1) == pytest.approx(0.5, abs=1e-15)
    assert gamma_cutoff(K1) == pytest.approx(0.5 * math.sqrt(1 / 18 + math.sqrt(1 + 1 / 324)), abs=1e-15)
    assert gamma_cutoff(K1) == pytest.approx(0.514076, abs=1e-6)


def test_large_k_limit():
    assert gamma_critical(ModelParams(k=10**6)) == pytest.approx(math.sqrt(0.5), abs=1e-6)
    assert gamma_critical(ModelParams(k=10**4)) == pytest.approx(math.sqrt(0.5), abs=1e-3)


def test_observable_examples():
    assert mf_observables(0.3, K1) == {"E": -8.0, "Jz": -9.0, "nu": 0.0}
    o = mf_observables(0.51, K1)
    assert o["Jz"] == pytest.approx(-8.650519, abs=1e-6)
    assert o["nu"] == pytest.approx(0.178270, abs=1e-6)
    # the six-digit hand value is rounded from rounded intermediates
    assert o["E"] == pytest.approx(-8.007061, abs=2e-6)
    ref = oracles.mf_piecewise(0.51, 1, 2, 18, 9, 1)
    assert (o["E"], o["Jz"], o["nu"]) == pytest.approx(ref, abs=1e-13)


@pytest.mark.parametrize("k", [1, 1.5, 3, 10])
def test_branch_continuity(k):
    p = ModelParams(k=k)
    gc = gamma_critical(p)
    below, above = mf_observables(gc, p), mf_observables(gc * (1 + 1e-14), p)
    for key in ("E", "Jz", "nu"):
        assert below[key] == pytest.approx(above[key], abs=1e-12)
    assert below == {"E": -8.0, "Jz": -9.0, "nu": 0.0}


def test_out_of_domain():
    gm = gamma_cutoff(K1)
    with pytest.raises(OutOfDomainError):
        mf_observables(gm, K1)
    with pytest.raises(OutOfDomainError):
        mf_critical(K1.with_gamma(gm * 1.01))
    with pytest.raises(ValueError):
        mf_critical(K1, mu=0)


@given(st.sampled_from([1, 1.5, 2, 3, 5, 10]), st.floats(0.01, 0.99))
def test_critical_angles_are_minima(k, frac):
    p = ModelParams(k=k)
    gc, gm = gamma_critical(p), gamma_cutoff(p)
    p = p.with_gamma(gc + frac * (gm - gc))
    a = mf_critical(p).angles
    f = lambda x: mf_energy_surface(tuple(x), p)
    x0 = a.as_tuple()
    e = f(x0)
    assert np.abs(_grad(f, x0)).max() <= 1e-6 * abs(e)
    assert np.linalg.eigvalsh(_hess(f, x0)).min() >= -1e-5
    # closed-form branch agrees with the surface at the critical point
    assert e == pytest.approx(mf_observables(p.gamma, p)["E"], abs=1e-10)
    # psi_c self-consistency
    assert 0.5 * (p.k - 0.5) * math.sin(a.psi) ** 2 == pytest.approx(mf_observables(p.gamma, p)["nu"], abs=1e-10)


@given(st.sampled_from([1, 2, 5]), st.floats(0.0, 0.99))
def test_north_pole_is_stationary_in_normal_phase(k, frac):
    p = ModelParams(k=k)
    p = p.with_gamma(frac * gamma_critical(p))
    f = lambda x: mf_energy_surface(tuple(x), p)
    assert np.abs(_grad(f, (0, 0, 0, 0))).max() <= 1e-6 * 8
    assert np.linalg.eigvalsh(_hess(f, (0, 0, 0, 0))).min() >= -1e-8


def test_psi_self_consistency_k1():
    a = mf_critical(K1.with_gamma(0.51)).angles
    assert 0.25 * math.sin(a.psi) ** 2 == pytest.approx(0.178270, abs=1e-6)


@given(st.sampled_from([1, 2, 3.5]), st.floats(0.01, 0.99))
def test_mu_sign_absorbed(k, frac):
    p = ModelParams(k=k)
    g = gamma_critical(p) + frac * (gamma_cutoff(p) - gamma_critical(p))
    plus = mf_critical(p.with_gamma(g), mu=1)
    minus = mf_critical(p.with_gamma(-g), mu=-1)
    assert plus.theta_c == pytest.approx(minus.theta_c, abs=1e-14)
    assert plus.psi_c == pytest.approx(minus.psi_c, abs=1e-14)
    e_plus = mf_energy_surface(plus.angles, p.with_gamma(g))
    e_minus = mf_energy_surface(minus.angles, p.with_gamma(-g))
    assert e_plus == pytest.approx(e_minus, abs=1e-12)
    assert mf_observables(g, p) == mf_observables(-g, p)


@given(st.integers(1, 12), st.floats(0, math.pi - 1e-3), st.floats(0, math.pi - 1e-3))
def test_nu_equals_number_moments_on_coherent_states(t, psi, varphi):
    rep = SpinRep(t)
    v = coherent_state(rep, psi, varphi)
    prob = np.abs(v) ** 2
    n = np.arange(rep.dim)
    lhs = prob @ n - prob @ (n * n) / t
    assert lhs == pytest.approx(0.5 * (rep.s - 0.5) * math.sin(psi) ** 2, abs=1e-10)


def test_dicke_mean_field_limit():
    p = ModelParams(k=10**6)
    for g in (0.3, 0.8, 1.1):
        a, b = dicke_mf_observables(g, p), mf_observables(g, p)
        for key in a:
            assert a[key] == pytest.approx(b[key], abs=1e-4)
