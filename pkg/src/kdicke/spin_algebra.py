"""SU(2) generators and the k-oscillator built from them.

Every matrix here is written in the |s, m> basis with ascending m
(m = -s first), so the number operator n = K_z + k reads 0, 1, ..., 2k
down the diagonal.  All matrices are real in this basis and are returned
as dense float64 arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class SpinRep:
    """Irreducible SU(2) representation labelled by the integer ``two_s = 2s``."""

    two_s: int

    def __post_init__(self):
        if isinstance(self.two_s, bool) or int(self.two_s) != self.two_s:
            raise ValueError(f"two_s must be an integer, got {self.two_s!r}")
        object.__setattr__(self, "two_s", int(self.two_s))
        if self.two_s < 1:
            raise ValueError(f"spin must be at least 1/2, got two_s={self.two_s}")

    @classmethod
    def from_spin(cls, s) -> "SpinRep":
        """Build from a spin value such as ``9``, ``1.5`` or ``"3/2"``."""
        two_s = 2 * Fraction(str(s))
        if two_s.denominator != 1:
            raise ValueError(f"{s!r} is not a half-integer")
        return cls(int(two_s))

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def dim(self) -> int:
        return self.two_s + 1

    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.s


def check_hermitian(a: np.ndarray, name: str = "operator", rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Raise ``ValueError`` unless ``a`` is square and Hermitian to ``rtol``."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    scale = np.abs(a).max() if a.size else 0.0
    err = np.abs(a - a.conj().T).max() if a.size else 0.0
    if err > rtol * scale:
        raise ValueError(f"{name} is not Hermitian: max|A - A^dag| = {err:.3e}")
    return a


def raising_elements(rep: SpinRep) -> np.ndarray:
    """Sub-diagonal of S+: ``<m+1|S+|m> = sqrt(s(s+1) - m(m+1))`` for m = -s..s-1.

    Cheap even for very large spins, where the dense matrix would not fit.
    """
    # exact in terms of two_s: s(s+1) - m(m+1) = (s - m)(s + m + 1)
    idx = np.arange(rep.two_s, dtype=float)          # idx = s + m
    return np.sqrt((rep.two_s - idx) * (idx + 1.0)) if rep.two_s else np.zeros(0)


def su2_generators(rep: SpinRep) -> dict[str, np.ndarray]:
    """Return ``Sz``, ``Splus``, ``Sminus`` and ``Sx`` for the representation."""
    sz = np.diag(rep.m_values())
    sp = np.diag(raising_elements(rep), k=-1)
    sm = sp.T.copy()
    return {"Sz": sz, "Splus": sp, "Sminus": sm, "Sx": 0.5 * (sp + sm)}


def k_ladder(rep: SpinRep) -> dict[str, np.ndarray]:
    """Deformed ladder operators ``b = K-/sqrt(2k)``, ``b_dag = K+/sqrt(2k)`` and ``n = Kz + k``.

    ``b`` is not Hermitian; only ``n`` is an observable.
    """
    gen = su2_generators(rep)
    norm = np.sqrt(rep.two_s)                        # sqrt(2k)
    n = gen["Sz"] + rep.s * np.eye(rep.dim)
    return {"b": gen["Sminus"] / norm, "b_dag": gen["Splus"] / norm, "n": n}


def ladder_elements(rep: SpinRep) -> np.ndarray:
    """``<n+1|b_dag|n>`` for n = 0..2k-1; tends to ``sqrt(n+1)`` as k grows."""
    return raising_elements(rep) / np.sqrt(rep.two_s)


def k_oscillator_hamiltonian(rep: SpinRep, Omega: float) -> np.ndarray:
    """``Omega (n + 1/2 - n^2 / 2k)``, diagonal in the number basis."""
    if not Omega > 0:
        raise ValueError(f"Omega must be positive, got {Omega}")
    n = np.arange(rep.dim, dtype=float)
    return np.diag(Omega * (n + 0.5 - n * n / rep.two_s))


def k_oscillator_symmetrized(rep: SpinRep, Omega: float) -> np.ndarray:
    """The same oscillator written as ``(Omega/2)(b b_dag + b_dag b)``."""
    ops = k_ladder(rep)
    b, bd = ops["b"], ops["b_dag"]
    return 0.5 * Omega * (b @ bd + bd @ b)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a
