"""k-Dicke and truncated Dicke Hamiltonians on the atom (x) field product space.

Tensor ordering is atom factor first, field factor second, row-major:
the basis index of ``|j, m_j> (x) |k, m_k>`` is ``a * (2k+1) + b`` with
``a = j + m_j`` and ``b = k + m_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh

from .errors import ConvergenceError
from .spin_algebra import SpinRep, su2_generators


def _two(value, name: str) -> int:
    two = 2 * Fraction(str(value))
    if two.denominator != 1:
        raise ValueError(f"{name}={value!r} is not a half-integer")
    return int(two)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters (omega, Omega, N, j, k, gamma).

    ``j`` defaults to ``N/2``.  Spins are stored as floats but validated
    (and exposed) through the exact integers ``two_j`` and ``two_k``.
    """

    omega: float = 1.0
    Omega: float = 2.0
    N: int = 18
    j: float | None = None
    k: float = 1.0
    gamma: float = 0.0
    two_j: int = field(init=False, repr=False)
    two_k: int = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("omega", "Omega", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.Omega > 0:
            raise ValueError(f"Omega must be positive, got {self.Omega}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        j = self.N / 2 if self.j is None else self.j
        two_j = _two(j, "j")
        if not 1 <= two_j <= self.N:
            raise ValueError(f"2j must lie in 1..N={self.N}, got 2j={two_j}")
        two_k = _two(self.k, "k")
        if two_k < 1:
            raise ValueError(f"2k must be a positive integer, got 2k={two_k}")
        object.__setattr__(self, "j", two_j / 2)
        object.__setattr__(self, "k", two_k / 2)
        object.__setattr__(self, "two_j", two_j)
        object.__setattr__(self, "two_k", two_k)

    def with_gamma(self, gamma: float) -> "ModelParams":
        return replace(self, gamma=gamma)

    def with_k(self, k: float) -> "ModelParams":
        return replace(self, k=k)

    @property
    def dim(self) -> int:
        return (self.two_j + 1) * (self.two_k + 1)

    @property
    def gamma_c_dicke(self) -> float:
        """Mean-field critical coupling of the ordinary Dicke model."""
        return math.sqrt(self.omega * self.N * self.Omega / (8 * self.j))


@dataclass(frozen=True)
class ParityOperator:
    """Diagonal ``exp(i pi Lambda)`` with its integer eigenvalues ``lambda_eigs``."""

    op: np.ndarray
    lambda_eigs: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.op)


@dataclass(frozen=True)
class DickeReference:
    """Fock-space truncation for the ordinary Dicke benchmark."""

    n_max: int = 60
    convergence_tol: float = 1e-8
    max_doublings: int = 3

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max}")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")


def atom_operators(p: ModelParams) -> dict[str, np.ndarray]:
    return su2_generators(SpinRep(p.two_j))


def field_operators(p: ModelParams) -> dict[str, np.ndarray]:
    return su2_generators(SpinRep(p.two_k))


def build_kdicke(p: ModelParams) -> np.ndarray:
    """``omega Jz + (Omega/2k)(K^2 - Kz^2) - 4 gamma / sqrt(2kN) Jx Kx``."""
    jops, kops = atom_operators(p), field_operators(p)
    k = p.k
    mk = np.diag(kops["Sz"])
    h_field = np.diag(p.Omega / (2 * k) * (k * (k + 1) - mk * mk))
    eye_a, eye_f = np.eye(p.two_j + 1), np.eye(p.two_k + 1)
    coupling = 4 * p.gamma / math.sqrt(2 * k * p.N)
    return (p.omega * np.kron(jops["Sz"], eye_f)
            + np.kron(eye_a, h_field)
            - coupling * np.kron(jops["Sx"], kops["Sx"]))


def lambda_eigenvalues(two_j: int, two_k: int) -> np.ndarray:
    """Excitation number ``j + m_j + k + m_k`` for every product basis state."""
    a = np.arange(two_j + 1)
    b = np.arange(two_k + 1)
    return (a[:, None] + b[None, :]).ravel()


def build_parity(j, k) -> ParityOperator:
    lam = lambda_eigenvalues(_two(j, "j"), _two(k, "k"))
    signs = np.where(lam % 2 == 0, 1.0, -1.0)
    return ParityOperator(op=np.diag(signs), lambda_eigs=lam)


def build_dicke_truncated(p: ModelParams, ref: DickeReference | None = None) -> np.ndarray:
    """Ordinary Dicke Hamiltonian with the boson truncated at ``n_max`` quanta.

    Only ``omega, Omega, N, j, gamma`` of ``p`` are used.
    """
    ref = ref or DickeReference()
    jops = atom_operators(p)
    nb = ref.n_max + 1
    a = np.diag(np.sqrt(np.arange(1, nb, dtype=float)), k=1)
    h_field = np.diag(p.Omega * (np.arange(nb) + 0.5))        # (Omega/2)(a^dag a + a a^dag)
    eye_a = np.eye(p.two_j + 1)
    return (p.omega * np.kron(jops["Sz"], np.eye(nb))
            + np.kron(eye_a, h_field)
            - 2 * p.gamma / math.sqrt(p.N) * np.kron(jops["Sx"], a + a.T))


# -- symmetry sectors ---------------------------------------------------------
#
# Off-diagonal elements of both Hamiltonians are <= 0 for gamma >= 0, and the
# Jx Kx (or Jx (a + a^dag)) hops connect every state of a given parity.  The
# ground state of each parity sector is therefore the unique positive
# (Perron) vector.  For the k-Dicke model the field reflection m_k -> -m_k is
# an extra symmetry that makes the lowest pair (quasi-)degenerate; for
# half-integer k it maps even onto odd parity (exact doublets), for integer k
# it splits the even sector in two with a splitting that can fall below
# machine precision.  The Perron vector is reflection-symmetric, so
# diagonalising in the even, reflection-symmetric block picks it out
# unambiguously.

def kdicke_sector_basis(p: ModelParams) -> np.ndarray:
    """Orthonormal columns spanning the even-parity, reflection-symmetric block."""
    nf = p.two_k + 1
    cols: list[tuple[int, ...]] = []
    for a in range(p.two_j + 1):
        for b in range(nf):
            if (a + b) % 2:
                continue
            if p.two_k % 2 == 0:
                mirror = p.two_k - b
                if mirror < b:
                    continue
                cols.append((a * nf + b, a * nf + mirror) if mirror != b else (a * nf + b,))
            else:
                cols.append((a * nf + b,))
    basis = np.zeros((p.dim, len(cols)))
    for c, idx in enumerate(cols):
        basis[list(idx), c] = 1.0 / math.sqrt(len(idx))
    return basis


def dicke_sector_basis(p: ModelParams, ref: DickeReference) -> np.ndarray:
    """Even-parity columns (``j + m_j + n`` even) of the truncated Dicke space."""
    nb = ref.n_max + 1
    idx = [a * nb + n for a in range(p.two_j + 1) for n in range(nb) if (a + n) % 2 == 0]
    basis = np.zeros(((p.two_j + 1) * nb, len(idx)))
    basis[idx, np.arange(len(idx))] = 1.0
    return basis


def field_reflection(p: ModelParams) -> np.ndarray:
    """Permutation ``|m_j, m_k> -> |m_j, -m_k>``; commutes with the k-Dicke Hamiltonian."""
    flip = np.eye(p.two_k + 1)[::-1]
    return np.kron(np.eye(p.two_j + 1), flip)


def _dicke_e0(p: ModelParams, n_max: int) -> float:
    ref = DickeReference(n_max=n_max)
    basis = dicke_sector_basis(p, ref)
    h = basis.T @ build_dicke_truncated(p, ref) @ basis
    return float(eigh(h, eigvals_only=True, subset_by_index=[0, 0])[0])


def converged_dicke_reference(p: ModelParams, ref: DickeReference | None = None) -> DickeReference:
    """Double ``n_max`` until E0 at ``p.gamma`` moves by less than ``convergence_tol``.

    The photon number grows with the coupling, so checking at the largest
    coupling of a sweep covers the whole sweep.
    """
    ref = ref or DickeReference()
    n_max = ref.n_max
    for _ in range(ref.max_doublings + 1):
        shift = abs(_dicke_e0(p, 2 * n_max) - _dicke_e0(p, n_max))
        if shift < ref.convergence_tol:
            return replace(ref, n_max=n_max)
        n_max *= 2
    raise ConvergenceError(
        f"Dicke truncation not converged at gamma={p.gamma}: "
        f"E0 moved by {shift:.3e} when doubling n_max to {n_max}")
