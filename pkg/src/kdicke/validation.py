"""Internal oracle suite behind ``kdicke validate`` (runs in a few seconds).

Each check compares a library result against an independent evaluation
(brute-force sums, explicit state vectors, hand-derived constants).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .exact import ground_state, kdicke_ground_state, observables
from .meanfield import gamma_critical, gamma_cutoff, mf_energy_surface, mf_observables
from .model import ModelParams, build_kdicke, build_parity
from .spin_algebra import (SpinRep, commutator, k_ladder, k_oscillator_hamiltonian,
                           k_oscillator_symmetrized, ladder_elements, su2_generators)
from .variational import Parity, sas_energy_surface, sas_state

TOL = 1e-12
SPINS = [SpinRep(t) for t in (1, 2, 3, 4, 5, 8, 13, 20)]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _maxabs(a):
    return float(np.abs(a).max()) if np.size(a) else 0.0


def check_su2_commutators():
    err = 0.0
    for rep in SPINS:
        g = su2_generators(rep)
        sz, sp, sm = g["Sz"], g["Splus"], g["Sminus"]
        err = max(err, _maxabs(commutator(sp, sm) - 2 * sz),
                  _maxabs(commutator(sz, sp) - sp), _maxabs(commutator(sz, sm) + sm))
    return err <= TOL, f"max deviation {err:.2e}"


def check_deformed_algebra():
    err = 0.0
    for rep in SPINS:
        o = k_ladder(rep)
        b, bd, n = o["b"], o["b_dag"], o["n"]
        err = max(err, _maxabs(commutator(b, bd) - (np.eye(rep.dim) - n / rep.s)),
                  _maxabs(commutator(b, n) - b), _maxabs(commutator(bd, n) + bd))
    return err <= TOL, f"max deviation {err:.2e}"


def check_oscillator_forms():
    err = 0.0
    for rep in SPINS:
        for om in (0.5, 2.0, 7.0):
            a, b = k_oscillator_hamiltonian(rep, om), k_oscillator_symmetrized(rep, om)
            err = max(err, _maxabs(a - b) / _maxabs(a))
    return err <= TOL, f"max relative deviation {err:.2e}"


def check_casimir():
    err = 0.0
    for rep in SPINS:
        g = su2_generators(rep)
        sy = (g["Splus"] - g["Sminus"]) / 2j
        cas = g["Sx"] @ g["Sx"] + sy @ sy + g["Sz"] @ g["Sz"]
        err = max(err, _maxabs(cas - rep.s * (rep.s + 1) * np.eye(rep.dim)))
    return err <= TOL, f"max deviation {err:.2e}"


def check_contraction():
    # k = 10^4: <n+1|b_dag|n> = sqrt((n+1)(1 - n/2k)) against the bosonic sqrt(n+1)
    el = ladder_elements(SpinRep(20000))
    dev = abs(el[1] - math.sqrt(2))
    return dev < 5e-5 and abs(el[0] - 1) < TOL, f"|<2|b_dag|1> - sqrt 2| = {dev:.2e}"


def check_parity_commutes():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        two_k = int(rng.integers(1, 21))
        p = ModelParams(k=two_k / 2)
        p = p.with_gamma(float(rng.uniform(0, gamma_cutoff(p))))
        h = build_kdicke(p)
        par = build_parity(p.j, p.k).op
        worst = max(worst, _maxabs(h @ par - par @ h) / _maxabs(h))
    return worst <= TOL, f"max relative commutator {worst:.2e}"


def check_zero_coupling():
    e = [ground_state(build_kdicke(ModelParams(k=k)))[0] for k in (0.5, 1, 2.5, 3, 10)]
    dev = max(abs(x + 8) for x in e)
    return dev <= 1e-12, f"max |E0 + 8| = {dev:.2e}"


def check_critical_couplings():
    p = ModelParams(k=1)
    gc, gm = gamma_critical(p), gamma_cutoff(p)
    ok = abs(gc - 0.5) <= TOL and abs(gm - 0.5 * math.sqrt(1 / 18 + math.sqrt(1 + 1 / 324))) <= TOL
    big = gamma_critical(ModelParams(k=10**4))
    ok = ok and abs(big - math.sqrt(0.5)) < 1e-3
    return ok, f"gamma_c(1)={gc!r}, gamma_m(1)={gm:.9f}, gamma_c(1e4)={big:.6f}"


def check_mf_point():
    p = ModelParams(k=1)
    obs = mf_observables(0.51, p)
    want = (1 - 4.5 * ((0.51 / 0.5) ** 2 + (0.5 / 0.51) ** 2), -9 * (0.5 / 0.51) ** 2,
            2.25 * ((0.51 / 0.5) ** 2 - (0.5 / 0.51) ** 2))
    dev = max(abs(obs[a] - b) for a, b in zip(("E", "Jz", "nu"), want))
    surf = mf_energy_surface((math.pi / 2, 0, math.pi / 2, 0), p.with_gamma(0.51))
    dev = max(dev, abs(surf - (1.5 - 0.51 * 18 * math.sqrt(2 / 18))))
    return dev <= 1e-12, f"max deviation {dev:.2e}"


def check_sas_oracle():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(60):
        p = ModelParams(k=int(rng.integers(1, 11)) / 2, gamma=float(rng.uniform(0, 1.2)))
        par = Parity.EVEN if rng.random() < 0.5 else Parity.ODD
        a = (rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi),
             rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        try:
            cf = sas_energy_surface(a, par, p)
            v = sas_state(a[:2], a[2:], par, p.j, p.k)
        except ValueError:
            continue
        e = float(np.real(np.vdot(v, build_kdicke(p) @ v)))
        obs = observables(v, p.j, p.k)
        worst = max(worst, abs(cf["E"] - e) / max(1, abs(e)),
                    abs(cf["Jz"] - obs["jz"]) / p.j, abs(cf["nu"] - obs["nu"]) / max(1, p.k))
    return worst <= 1e-10, f"max relative deviation {worst:.2e}"


def check_exact_below_sas():
    worst = -math.inf
    for k in (1.5, 2, 3):
        for g in (0.3, 0.6, 0.8):
            p = ModelParams(k=k, gamma=g)
            if g >= gamma_cutoff(p):
                continue
            e0 = kdicke_ground_state(p)[0]
            e_sas = sas_energy_surface((0.4, 0.0, 0.9, 0.0), Parity.EVEN, p)["E"]
            worst = max(worst, e0 - e_sas)
    return worst <= 1e-10, f"max E0 - E_sas = {worst:.3e}"


CHECKS = [
    ("su2 commutators", check_su2_commutators),
    ("deformed ladder algebra", check_deformed_algebra),
    ("k-oscillator symmetrized form", check_oscillator_forms),
    ("casimir", check_casimir),
    ("ladder contraction at k=1e4", check_contraction),
    ("parity commutes with H", check_parity_commutes),
    ("zero-coupling ground energy", check_zero_coupling),
    ("critical couplings", check_critical_couplings),
    ("mean-field closed forms", check_mf_point),
    ("projected-state closed form vs vectors", check_sas_oracle),
    ("exact energy below trial energy", check_exact_below_sas),
]


def run_all() -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:                   # a crash is a failed check, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), f"{detail} ({time.perf_counter() - t:.2f}s)"))
    return out
