import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from kdicke.errors import ConvergenceError
from kdicke.meanfield import gamma_cutoff
from kdicke.model import (DickeReference, ModelParams, build_dicke_truncated, build_kdicke,
                          build_parity, converged_dicke_reference, field_reflection,
                          kdicke_sector_basis, lambda_eigenvalues)

two_k = st.integers(min_value=1, max_value=20)


def test_defaults_and_dimension():
    p = ModelParams(k=1, gamma=0.3)
    assert (p.omega, p.Omega, p.N, p.j) == (1.0, 2.0, 18, 9.0)
    assert p.dim == 57
    assert build_kdicke(p).shape == (57, 57)
    assert p.gamma_c_dicke == pytest.approx(math.sqrt(0.5), abs=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(omega=0), dict(Omega=-1), dict(N=0), dict(N=2.5), dict(j=10), dict(j=0.3),
    dict(k=0), dict(k=0.7), dict(gamma=math.nan), dict(omega=math.inf),
])
def test_invalid_params_rejected(kwargs):
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


@pytest.mark.parametrize("k", [0.5, 1, 1.5, 2, 3, 10])
def test_matches_loop_oracle(k):
    p = ModelParams(k=k, gamma=0.61)
    assert np.abs(build_kdicke(p) - oracles.kdicke_hamiltonian(1, 2, 18, 9, k, 0.61)).max() < 1e-13


@pytest.mark.parametrize("k", [0.5, 1, 3, 7.5, 10])
def test_zero_coupling_ground_energy(k):
    e = np.linalg.eigvalsh(build_kdicke(ModelParams(k=k)))
    assert e[0] == pytest.approx(-8.0, abs=1e-12)


@given(two_k, st.floats(min_value=0, max_value=1))
def test_parity_commutes(t, frac):
    p = ModelParams(k=t / 2)
    p = p.with_gamma(frac * gamma_cutoff(p))
    h = build_kdicke(p)
    par = build_parity(p.j, p.k).op
    assert np.abs(h @ par - par @ h).max() <= 1e-12 * np.abs(h).max()
    assert np.array_equal(h, h.T)
    assert h.dtype == np.float64


@given(two_k, st.floats(min_value=0, max_value=2))
def test_field_reflection_commutes(t, g):
    p = ModelParams(k=t / 2, gamma=g)
    h, r = build_kdicke(p), field_reflection(p)
    assert np.abs(h @ r - r @ h).max() <= 1e-12 * np.abs(h).max()


def test_parity_examples():
    par = build_parity(9, 1)
    # index a*(2k+1)+b with a = j+m_j, b = k+m_k
    assert par.lambda_eigs[0] == 0 and par.diagonal[0] == 1
    assert par.lambda_eigs[3] == 1 and par.diagonal[3] == -1
    brute = sum((-1) ** int(mj + 9 + mk + 1) for mj in range(-9, 10) for mk in (-1, 0, 1))
    assert np.trace(par.op) == brute
    assert set(np.unique(par.diagonal)) == {-1.0, 1.0}


def test_lambda_half_integer():
    lam = lambda_eigenvalues(1, 3)
    assert lam.min() == 0 and lam.max() == 4 and lam.size == 8


def test_dicke_matches_loop_oracle():
    p = ModelParams(gamma=0.9)
    ref = DickeReference(n_max=12)
    assert np.abs(build_dicke_truncated(p, ref) - oracles.dicke_hamiltonian(1, 2, 18, 9, 0.9, 12)).max() < 1e-13


def test_dicke_zero_coupling():
    e = np.linalg.eigvalsh(build_dicke_truncated(ModelParams(), DickeReference(n_max=4)))
    assert e[0] == pytest.approx(-8.0, abs=1e-12)


def test_dicke_truncation_converged_at_gamma_one():
    p = ModelParams(gamma=1.0)
    ref = converged_dicke_reference(p)
    assert ref.n_max == 60                       # no doubling needed at the default


def test_dicke_truncation_failure_is_reported():
    p = ModelParams(gamma=1.2)
    with pytest.raises(ConvergenceError):
        converged_dicke_reference(p, DickeReference(n_max=2, max_doublings=1))


def test_dicke_reference_validation():
    with pytest.raises(ValueError):
        DickeReference(n_max=0)
    with pytest.raises(ValueError):
        DickeReference(convergence_tol=0)


@pytest.mark.parametrize("k", [0.5, 1, 1.5, 4])
def test_sector_basis_is_orthonormal_and_invariant(k):
    p = ModelParams(k=k, gamma=0.8)
    b = kdicke_sector_basis(p)
    assert np.allclose(b.T @ b, np.eye(b.shape[1]), atol=1e-15)
    h = build_kdicke(p)
    # H maps the block into itself
    hb = h @ b
    assert np.abs(hb - b @ (b.T @ hb)).max() < 1e-12
    par = build_parity(p.j, p.k).op
    assert np.allclose(par @ b, b)


def test_with_helpers():
    p = ModelParams(k=2)
    assert p.with_gamma(0.4).gamma == 0.4 and p.with_k(1.5).two_k == 3
