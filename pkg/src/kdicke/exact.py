"""Exact ground states by dense diagonalisation, observables and fidelity sweeps."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .errors import ConvergenceError, NoDipError, SolverError
from .model import (
    DickeReference,
    ModelParams,
    build_dicke_truncated,
    build_kdicke,
    converged_dicke_reference,
    dicke_sector_basis,
    kdicke_sector_basis,
)
from .spin_algebra import check_hermitian

RESIDUAL_TOL = 1e-10
FLAT_FIDELITY = 1 - 1e-9


@dataclass(frozen=True)
class GroundStateRecord:
    gamma: float
    energy0: float
    jz: float
    nu: float
    fidelity: float | None = 1.0       # None for methods without a state vector


@dataclass(frozen=True)
class TransitionEstimate:
    gamma_star: float
    fidelity_min: float
    grid_spacing: float


def ground_state(h: np.ndarray) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of a Hermitian matrix (dense LAPACK, full spectrum).

    Raises ``SolverError`` if the residual ``|H psi - E psi|`` exceeds
    ``1e-10 |H|``.
    """
    h = check_hermitian(h, "Hamiltonian")
    w, v = np.linalg.eigh(h)
    e0, psi = float(w[0]), v[:, 0]
    _check_residual(h, e0, psi)
    return e0, psi


def _lowest(h: np.ndarray) -> tuple[float, np.ndarray]:
    # subset driver: same dense solver family, only the lowest pair
    w, v = eigh(h, subset_by_index=[0, 0])
    e0, psi = float(w[0]), v[:, 0]
    _check_residual(h, e0, psi)
    return e0, psi


def _check_residual(h, e0, psi):
    scale = max(np.abs(h).max(), 1.0)
    res = np.abs(h @ psi - e0 * psi).max()
    if res > RESIDUAL_TOL * scale:
        raise ConvergenceError(f"eigensolver residual {res:.3e} exceeds tolerance")


def kdicke_ground_state(p: ModelParams) -> tuple[float, np.ndarray]:
    """Ground state of the k-Dicke Hamiltonian, resolved by symmetry.

    Diagonalises the even-parity, field-reflection-symmetric block, where
    the ground state is unique (see :mod:`kdicke.model`), and embeds the
    result back into the full product space.
    """
    basis = kdicke_sector_basis(p)
    e0, v = _lowest(basis.T @ build_kdicke(p) @ basis)
    return e0, basis @ v


def dicke_ground_state(p: ModelParams, ref: DickeReference) -> tuple[float, np.ndarray]:
    """Even-parity ground state of the truncated Dicke Hamiltonian."""
    basis = dicke_sector_basis(p, ref)
    e0, v = _lowest(basis.T @ build_dicke_truncated(p, ref) @ basis)
    return e0, basis @ v


def observables(psi0: np.ndarray, j, k) -> dict[str, float]:
    """``<Jz>`` and ``nu = <n> - <n^2>/2k`` of a state on the (2j+1)(2k+1) space."""
    two_j, two_k = round(2 * j), round(2 * k)
    return _observables(psi0, two_j, two_k + 1, nu_k=two_k / 2)


def dicke_observables(psi0: np.ndarray, j, n_max: int) -> dict[str, float]:
    """``<Jz>`` and the photon number ``<a^dag a>`` on the truncated Dicke space."""
    return _observables(psi0, round(2 * j), n_max + 1, nu_k=None)


def _observables(psi0, two_j, nf, nu_k):
    psi0 = np.asarray(psi0)
    if psi0.shape != ((two_j + 1) * nf,):
        raise ValueError(f"state has shape {psi0.shape}, expected ({(two_j + 1) * nf},)")
    prob = (np.abs(psi0) ** 2).reshape(two_j + 1, nf)
    m_j = np.arange(two_j + 1) - two_j / 2
    n = np.arange(nf, dtype=float)
    jz = float(prob.sum(axis=1) @ m_j)
    field = prob.sum(axis=0)
    nu = float(field @ n) if nu_k is None else float(field @ (n - n * n / (2 * nu_k)))
    return {"jz": jz, "nu": nu}


def _validate_grid(gamma_grid) -> np.ndarray:
    grid = np.asarray(gamma_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ValueError("fidelity sweep needs at least 3 grid points")
    if not np.all(np.diff(grid) > 0):
        raise ValueError("gamma grid must be strictly increasing")
    return grid


def fidelity_curve(p: ModelParams, gamma_grid, dicke: DickeReference | None = None,
                   threads: int = 1) -> list[GroundStateRecord]:
    """Exact ground states along ``gamma_grid`` with neighbour fidelities.

    The fidelity ``|<psi(g_i)|psi(g_{i+1})>|^2`` is stored on the record at
    ``g_{i+1}``; the first record carries 1.  With ``dicke`` given, the
    ordinary Dicke model (truncation checked at the largest coupling) is
    swept instead of the k-Dicke model.
    """
    grid = _validate_grid(gamma_grid)
    if dicke is not None:
        far = grid[np.argmax(np.abs(grid))]
        dicke = converged_dicke_reference(p.with_gamma(float(far)), dicke)

    def solve(g):
        q = p.with_gamma(float(g))
        try:
            if dicke is None:
                e0, psi = kdicke_ground_state(q)
                obs = observables(psi, q.j, q.k)
            else:
                e0, psi = dicke_ground_state(q, dicke)
                obs = dicke_observables(psi, q.j, dicke.n_max)
        except SolverError as exc:
            raise SolverError(f"gamma={g}: {exc}") from exc
        return e0, psi, obs

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            solved = list(pool.map(solve, grid))
    else:
        solved = [solve(g) for g in grid]

    records = []
    prev = None
    for g, (e0, psi, obs) in zip(grid, solved):
        fid = 1.0 if prev is None else min(float(abs(np.vdot(prev, psi)) ** 2), 1.0)
        records.append(GroundStateRecord(float(g), e0, obs["jz"], obs["nu"], fid))
        prev = psi
    return records


def locate_transition(records: list[GroundStateRecord]) -> TransitionEstimate:
    """Grid point of minimal fidelity (first record excluded, ties to smaller gamma).

    A minimum on the last grid point is not a dip (the curve may still be
    falling) and raises ``NoDipError`` like a flat curve does.
    """
    if len(records) < 3:
        raise ValueError("need at least 3 records")
    fids = np.array([r.fidelity for r in records[1:]])
    i = int(np.argmin(fids))                    # argmin returns the first of equal minima
    if fids[i] > FLAT_FIDELITY:
        raise NoDipError(f"fidelity never drops below {FLAT_FIDELITY!r} (min {fids[i]!r})")
    if i == len(fids) - 1:
        raise NoDipError(f"fidelity minimum sits on the last grid point gamma={records[-1].gamma}")
    gammas = np.array([r.gamma for r in records])
    spacing = float(np.min(np.diff(gammas)))
    return TransitionEstimate(records[i + 1].gamma, float(fids[i]), spacing)


def count_local_minima(records: list[GroundStateRecord]) -> int:
    """Number of strict interior local minima of the fidelity (first record excluded)."""
    f = [r.fidelity for r in records[1:]]
    return sum(1 for i in range(1, len(f) - 1) if f[i] < f[i - 1] and f[i] < f[i + 1])


__all__ = [
    "GroundStateRecord", "TransitionEstimate", "ground_state", "kdicke_ground_state",
    "dicke_ground_state", "observables", "dicke_observables", "fidelity_curve",
    "locate_transition", "count_local_minima",
]
