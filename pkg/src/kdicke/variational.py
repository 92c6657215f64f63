"""Parity-projected (symmetry-adapted) coherent states.

A trial state ``|xi> (x) |eta>`` is projected with ``(1 +/- P)/2``; the
``Parity`` label carried through this module is the sign that appears in
the closed-form energy surface,

    N^{-2} = 2 +/- 2 (-cos theta)^{2j} (-cos psi)^{2k}.

Because ``<xi|-xi><eta|-eta> = cos^{2j}(theta) cos^{2k}(psi)``, the state
with label ``s`` is ``|xi,eta> + s (-1)^{2(j+k)} |-xi,-eta>``: for integer
``j + k`` the label is the eigenvalue of ``exp(i pi Lambda)``, for
half-integer ``j + k`` it is the opposite one.  :func:`physical_parity`
does the conversion.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ConvergenceError, DegenerateProjectionError, OutOfDomainError
from .meanfield import AngleSet, _check_window, gamma_critical, gamma_cutoff, mf_critical
from .model import ModelParams
from .spin_algebra import SpinRep

DEGENERATE_NORM = 1e-14


class Parity(enum.Enum):
    EVEN = 1
    ODD = -1

    @property
    def sign(self) -> int:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Parity":
        key = text.strip().lower()
        if key in ("even", "+", "+1"):
            return cls.EVEN
        if key in ("odd", "-", "-1"):
            return cls.ODD
        raise ValueError(f"unknown parity {text!r}")


def default_parity(two_j: int, two_k: int) -> Parity:
    """Default label: odd for half-integer k with integer j, even otherwise.

    With integer j both choices select the physically even sector.
    """
    if two_k % 2 == 1 and two_j % 2 == 0:
        return Parity.ODD
    return Parity.EVEN


def physical_parity(parity: Parity, two_j: int, two_k: int) -> int:
    """Eigenvalue of ``exp(i pi Lambda)`` on the state carrying ``parity``."""
    return parity.sign * (-1) ** (two_j + two_k)


@dataclass(frozen=True)
class CsasIntermediates:
    lam: float      # gamma_c / gamma
    delta: float    # j omega / (Omega (k - 1/2))
    Gamma: float    # 1 + delta (lam^2 - lam^-2), equals cos^2 of the critical field angle

    @classmethod
    def at(cls, gamma: float, p: ModelParams) -> "CsasIntermediates":
        lam = gamma_critical(p) / abs(gamma)
        delta = p.j * p.omega / (p.Omega * (p.k - 0.5))
        big_gamma = 1 + delta * (lam * lam - 1 / (lam * lam))
        return cls(lam, delta, max(big_gamma, 0.0))       # rounding near the cutoff


@dataclass(frozen=True)
class SasMinimum:
    angles: AngleSet
    energy: float
    jz: float
    nu: float
    parity: Parity
    n_starts: int
    converged: bool


# -- explicit vectors -------------------------------------------------------

def coherent_state(rep: SpinRep, theta: float, phi: float) -> np.ndarray:
    """Spin-coherent vector ordered by ascending m (``theta = 0`` is ``|s, -s>``).

    Components ``sqrt(C(2s, m)) xi^m / (1 + |xi|^2)^s`` with
    ``xi = tan(theta/2) e^{i phi}``, written with half-angle sines and
    cosines so that nothing overflows near the south pole.
    """
    n = rep.two_s
    m = np.arange(n + 1)
    logc = np.array([math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1) for i in m])
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    with np.errstate(divide="ignore"):
        mag = np.exp(0.5 * logc) * np.power(s, m) * np.power(c, n - m)
    return mag * np.exp(1j * phi * m)


def sas_state(xi_angles, eta_angles, parity: Parity, j, k) -> np.ndarray:
    """Normalised ``N (|xi>|eta> + s (-1)^{2(j+k)} |-xi>|-eta>)``.

    ``xi_angles = (theta, phi)``, ``eta_angles = (psi, varphi)``;
    ``|-xi>`` is the coherent state at ``(theta, phi + pi)``.
    """
    two_j, two_k = round(2 * j), round(2 * k)
    theta, phi = xi_angles
    psi, varphi = eta_angles
    norm2 = 2 + 2 * parity.sign * _overlap_sign_power(theta, psi, two_j, two_k)
    if norm2 < DEGENERATE_NORM:
        raise DegenerateProjectionError(
            f"{parity.name.lower()} projection vanishes at theta={theta}, psi={psi}")
    ja, fa = SpinRep(two_j), SpinRep(two_k)
    plus = np.kron(coherent_state(ja, theta, phi), coherent_state(fa, psi, varphi))
    minus = np.kron(coherent_state(ja, theta, phi + math.pi), coherent_state(fa, psi, varphi + math.pi))
    eps = physical_parity(parity, two_j, two_k)
    return (plus + eps * minus) / math.sqrt(norm2)


def _overlap_sign_power(theta, psi, two_j, two_k):
    return (-math.cos(theta)) ** two_j * (-math.cos(psi)) ** two_k


# -- closed forms -------------------------------------------------------------

def sas_energy_surface(a: AngleSet | tuple, parity: Parity, p: ModelParams) -> dict[str, float]:
    """Closed-form ``E``, ``Jz`` and ``nu`` of the projected state.

    Algebraically rearranged so that no negative powers appear
    (j = 1/2 or k = 1/2 are safe) and no tangents of the azimuths.
    """
    theta, phi, psi, varphi = a.as_tuple() if isinstance(a, AngleSet) else a
    s = parity.sign
    tj, tk = p.two_j, p.two_k
    ct, cp = math.cos(theta), math.cos(psi)
    x_atom = (-ct) ** tj
    denom = 1 + s * x_atom * (-cp) ** tk
    if 2 * denom < DEGENERATE_NORM:
        raise DegenerateProjectionError(
            f"{parity.name.lower()} projection vanishes at theta={theta}, psi={psi}")
    # -j cos(theta) [1 +/- cos^{2j-2} ...] with the exponent moved onto (-cos theta)
    jz = -p.j * (ct - s * (-ct) ** (tj - 1) * (-cp) ** tk) / denom
    if tk == 1:
        nu = 0.0
    else:
        nu = (0.5 * (p.k - 0.5) * math.sin(psi) ** 2
              * (1 - s * x_atom * (-cp) ** (tk - 2)) / denom)
    cross = s * math.sin(phi) * math.sin(varphi) * (-ct) ** (tj - 1) * (-cp) ** (tk - 1)
    inter = (-2 * p.j * math.sqrt(2 * p.k / p.N) * math.sin(theta) * math.sin(psi)
             * (math.cos(phi) * math.cos(varphi) - cross) / denom)
    energy = p.omega * jz + p.Omega * (nu + 0.5) + p.gamma * inter
    return {"E": energy, "Jz": jz, "nu": nu}


def csas_observables(gamma: float, parity: Parity, p: ModelParams) -> dict[str, float]:
    """Projected-state observables at the mean-field critical angles, in closed form."""
    gm = gamma_cutoff(p)
    _check_window(gamma, gm)
    # (-1)^{2(j+k)}; also stands in for (-1)^{2k} in the Jz numerators, which
    # keeps half-integer j consistent with the projected vectors
    sj = (-1) ** (p.two_j + p.two_k)
    s = parity.sign
    g = abs(gamma)
    if g <= gamma_critical(p):
        den = 1 + s * sj
        if den == 0:
            raise DegenerateProjectionError(
                f"{parity.name.lower()} parity with 2j={p.two_j}, 2k={p.two_k} "
                "annihilates the normal-phase state")
        ratio = (1 + s * sj) / den
        return {"E": p.Omega / 2 - p.j * p.omega * ratio, "Jz": -p.j * ratio, "nu": 0.0}
    ci = CsasIntermediates.at(g, p)
    lam2 = ci.lam * ci.lam
    l4j = lam2 ** p.two_j                        # lambda^{4j}
    gk = ci.Gamma ** p.k
    den = 1 + s * sj * l4j * gk
    jz = -p.j * lam2 * (1 + s * sj * lam2 ** (p.two_j - 2) * gk) / den
    if p.two_k == 1:
        nu = 0.0
    else:
        nu = 0.5 * (p.k - 0.5) * (1 - (ci.Gamma + s * sj * l4j * ci.Gamma ** (p.k - 1)) / den)
    inter_energy = -p.j * p.omega / lam2 * (1 - lam2 * lam2) / den
    energy = p.Omega / 2 + p.omega * jz + p.Omega * nu + inter_energy
    return {"E": energy, "Jz": jz, "nu": nu}


# -- numerical minimisation -------------------------------------------------

GRID_SIZE = 9
GRID_EDGE = 0.01
FATOL = 1e-12
MAX_ITER = 2000
AGREEMENT_TOL = 1e-8


def _objective(parity, p, full):
    def f(x):
        a = tuple(x) if full else (x[0], 0.0, x[1], 0.0)
        try:
            return sas_energy_surface(a, parity, p)["E"]
        except DegenerateProjectionError:
            return math.inf
    return f


def minimize_sas(p: ModelParams, parity: Parity, gamma: float | None = None,
                 full_angles: bool = False, grid_size: int = GRID_SIZE) -> SasMinimum:
    """Global minimum of the projected energy surface by multi-start Nelder-Mead.

    Starts from a ``grid_size x grid_size`` grid in ``(theta, psi)`` plus the
    mean-field critical point, with the azimuths fixed at zero unless
    ``full_angles`` (then each start also carries zero azimuths and all four
    angles are free).  ``converged`` is False when the two best starts
    disagree by more than 1e-8.
    """
    if gamma is not None:
        p = p.with_gamma(gamma)
    _check_window(p.gamma, gamma_cutoff(p))
    edge = np.linspace(GRID_EDGE, math.pi - GRID_EDGE, grid_size)
    starts = [np.array(x) for x in itertools.product(edge, edge)]
    mf = mf_critical(p, mu=1 if p.gamma >= 0 else -1).angles
    starts.append(np.array([mf.theta, mf.psi]))
    if full_angles:
        starts = [np.array([t, 0.0, q, 0.0]) for t, q in starts]
        starts[-1][1] = mf.phi
    f = _objective(parity, p, full_angles)
    results = []
    for x0 in starts:
        r = minimize(f, x0, method="Nelder-Mead",
                     options={"fatol": FATOL, "xatol": 1e-10, "maxiter": MAX_ITER})
        if math.isfinite(r.fun):
            results.append(r)
    if not results:
        raise ConvergenceError(f"every start hit a degenerate projection at gamma={p.gamma}")
    results.sort(key=lambda r: r.fun)
    best = results[0]
    converged = len(results) > 1 and abs(results[1].fun - best.fun) <= AGREEMENT_TOL
    x = best.x if full_angles else (best.x[0], 0.0, best.x[1], 0.0)
    angles = AngleSet.wrapped(*x)
    obs = sas_energy_surface(angles, parity, p)
    return SasMinimum(angles, obs["E"], obs["Jz"], obs["nu"], parity, len(starts), converged)


__all__ = [
    "Parity", "CsasIntermediates", "SasMinimum", "OutOfDomainError",
    "coherent_state", "sas_state", "sas_energy_surface", "csas_observables",
    "minimize_sas", "default_parity", "physical_parity",
]
