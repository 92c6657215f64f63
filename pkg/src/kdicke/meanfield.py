"""Mean-field analysis with product spin-coherent trial states.

Closed forms only; nothing here diagonalises a matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfDomainError
from .model import ModelParams

DOMAIN_RTOL = 1e-12
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class AngleSet:
    """Bloch angles of the atomic (theta, phi) and field (psi, varphi) coherent states."""

    theta: float
    phi: float
    psi: float
    varphi: float

    def __post_init__(self):
        vals = (self.theta, self.phi, self.psi, self.varphi)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"angles must be finite, got {vals}")
        if not (0 <= self.theta < math.pi and 0 <= self.psi < math.pi):
            raise ValueError(f"polar angles must lie in [0, pi): theta={self.theta}, psi={self.psi}")
        if not (0 <= self.phi < TWO_PI and 0 <= self.varphi < TWO_PI):
            raise ValueError(f"azimuths must lie in [0, 2pi): phi={self.phi}, varphi={self.varphi}")

    @classmethod
    def wrapped(cls, theta, phi, psi, varphi) -> "AngleSet":
        """Fold arbitrary real angles onto the canonical ranges (same coherent states)."""
        theta, phi = _fold(theta, phi)
        psi, varphi = _fold(psi, varphi)
        return cls(theta, phi, psi, varphi)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.theta, self.phi, self.psi, self.varphi)


def _fold(polar: float, azimuth: float) -> tuple[float, float]:
    polar = math.fmod(polar, TWO_PI)
    if polar < 0:
        polar += TWO_PI
    if polar > math.pi:
        polar, azimuth = TWO_PI - polar, azimuth + math.pi
    if polar >= math.pi:
        polar = math.nextafter(math.pi, 0.0)
    azimuth = math.fmod(azimuth, TWO_PI)
    if azimuth < 0:
        azimuth += TWO_PI
    if azimuth >= TWO_PI:
        azimuth = 0.0
    return polar, azimuth


@dataclass(frozen=True)
class MfCriticalData:
    """Critical and cutoff couplings; the angles are ``None`` outside the superradiant window."""

    gamma_c: float
    gamma_m: float
    theta_c: float | None = None
    psi_c: float | None = None
    mu: int = 1

    @property
    def angles(self) -> AngleSet:
        """Minimising angles; azimuths chosen so that cos(phi) cos(varphi) = mu."""
        phi = 0.0 if self.mu > 0 else math.pi
        if self.theta_c is None:
            return AngleSet(0.0, 0.0, 0.0, 0.0)
        return AngleSet(self.theta_c, phi, self.psi_c, 0.0)


def gamma_critical(p: ModelParams) -> float:
    """``sqrt(omega N Omega (k - 1/2) / (8 j k))``; zero for k = 1/2."""
    return math.sqrt(p.omega * p.N * p.Omega * (p.k - 0.5) / (8 * p.j * p.k))


def gamma_cutoff(p: ModelParams) -> float:
    r = p.Omega * (p.k - 0.5) / (2 * p.omega * p.j)
    return gamma_critical(p) * math.sqrt(r + math.sqrt(1 + r * r))


def mf_energy_surface(a: AngleSet | tuple, p: ModelParams) -> float:
    theta, phi, psi, varphi = a.as_tuple() if isinstance(a, AngleSet) else a
    jz = -p.j * math.cos(theta)
    nu = 0.5 * (p.k - 0.5) * math.sin(psi) ** 2
    inter = (-2 * p.j * math.sqrt(2 * p.k / p.N)
             * math.sin(theta) * math.sin(psi) * math.cos(phi) * math.cos(varphi))
    return p.omega * jz + p.Omega * (nu + 0.5) + p.gamma * inter


def mf_critical(p: ModelParams, mu: int = 1) -> MfCriticalData:
    """Critical data at ``p.gamma``.

    Raises ``OutOfDomainError`` when ``|gamma|`` exceeds the cutoff (the
    field angle would need ``sin(psi) > 1``).  With ``mu = -1`` the same
    physics is obtained at ``-gamma``.
    """
    if mu not in (1, -1):
        raise ValueError(f"mu must be +1 or -1, got {mu}")
    gc, gm = gamma_critical(p), gamma_cutoff(p)
    g = abs(p.gamma)
    if g > gm * (1 + DOMAIN_RTOL):
        raise OutOfDomainError(f"|gamma|={g} exceeds the cutoff gamma_m={gm}")
    if g <= gc:
        return MfCriticalData(gc, gm, mu=mu)
    ratio2 = (gc / p.gamma) ** 2
    theta_c = math.acos(ratio2)
    arg = (mu * p.omega * p.gamma / (2 * gc * gc) * math.sqrt(p.N / (2 * p.k))
           * math.sqrt(1 - ratio2 * ratio2))
    if arg > 1 + DOMAIN_RTOL or arg < -DOMAIN_RTOL:
        raise OutOfDomainError(
            f"field angle undefined at gamma={p.gamma}, mu={mu} (sin psi = {arg!r})")
    psi_c = math.asin(min(arg, 1.0))
    return MfCriticalData(gc, gm, theta_c, psi_c, mu)


def _check_window(gamma: float, gm: float):
    if abs(gamma) >= gm * (1 - DOMAIN_RTOL):
        raise OutOfDomainError(
            f"|gamma|={abs(gamma)} is at or beyond the cutoff gamma_m={gm}")


def mf_observables(gamma: float, p: ModelParams) -> dict[str, float]:
    """Piecewise ground-state ``E``, ``Jz`` and ``nu`` (the normal branch at gamma = gamma_c)."""
    gc, gm = gamma_critical(p), gamma_cutoff(p)
    _check_window(gamma, gm)
    g = abs(gamma)
    if g <= gc:
        return {"E": p.Omega / 2 - p.j * p.omega, "Jz": -p.j, "nu": 0.0}
    up, down = (g / gc) ** 2, (gc / g) ** 2
    return {
        "E": p.Omega / 2 - 0.5 * p.j * p.omega * (up + down),
        "Jz": -p.j * down,
        "nu": p.j * p.omega / (2 * p.Omega) * (up - down),
    }


def dicke_mf_observables(gamma: float, p: ModelParams) -> dict[str, float]:
    """Large-k limit of :func:`mf_observables` (ordinary Dicke model, no cutoff)."""
    gc = p.gamma_c_dicke
    g = abs(gamma)
    if g <= gc:
        return {"E": p.Omega / 2 - p.j * p.omega, "Jz": -p.j, "nu": 0.0}
    up, down = (g / gc) ** 2, (gc / g) ** 2
    return {
        "E": p.Omega / 2 - 0.5 * p.j * p.omega * (up + down),
        "Jz": -p.j * down,
        "nu": p.j * p.omega / (2 * p.Omega) * (up - down),
    }
