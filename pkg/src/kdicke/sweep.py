"""Configuration, orchestration and file output for coupling sweeps.

Config files are flat ``key=value`` lines with ``#`` comments, e.g.::

    omega=1
    Omega=2
    N=18
    k_list=3,4,5,7
    gamma_max=1.2
    methods=mf,exact
"""
from __future__ import annotations

import json
import math
import os
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, NoDipError, SolverError
from .exact import GroundStateRecord, TransitionEstimate, fidelity_curve, locate_transition
from .meanfield import dicke_mf_observables, gamma_critical, gamma_cutoff, mf_observables
from .model import DickeReference, ModelParams
from .variational import Parity, csas_observables, default_parity, minimize_sas

METHODS = ("mf", "csas", "sas", "exact", "dicke")
KEYS = ("omega", "Omega", "N", "j", "k_list", "gamma_min", "gamma_max", "gamma_step",
        "methods", "parity", "output_dir", "dicke_n_max", "threads")
CSV_HEADER = "gamma,energy,jz,nu,fidelity"
TRANSITION_HEADER = "k,gamma_star,fidelity_min"
COLUMNS = ("energy", "jz", "nu", "fidelity")


def fmt(x: float) -> str:
    """17 significant digits: round-trips every float64 exactly."""
    return "%.17g" % x


def k_label(k: float) -> str:
    return ("%d" % k) if float(k).is_integer() else ("%g" % k)


@dataclass(frozen=True)
class SweepConfig:
    params: ModelParams                      # gamma unused; k replaced per entry of k_list
    k_list: tuple[float, ...]
    gamma_min: float = 0.0
    gamma_max: float = 1.2
    gamma_step: float = 1e-3
    methods: tuple[str, ...] = ("mf", "exact")
    parity_override: Parity | None = None
    output_dir: str = "kdicke_out"
    dicke_n_max: int = 60
    threads: int = 0                         # 0 means one per CPU

    def __post_init__(self):
        if not self.k_list:
            raise ConfigError("k_list must be non-empty")
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"methods contains unknown entries {bad}; choose from {list(METHODS)}")
        for name in ("gamma_min", "gamma_max", "gamma_step"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if not self.gamma_step > 0:
            raise ConfigError(f"gamma_step must be > 0, got {self.gamma_step}")
        if not self.gamma_min < self.gamma_max:
            raise ConfigError(f"gamma_min ({self.gamma_min}) must be < gamma_max ({self.gamma_max})")
        if len(self.grid()) < 3:
            raise ConfigError("gamma grid must contain at least 3 points")
        if self.dicke_n_max < 1:
            raise ConfigError("dicke_n_max must be a positive integer")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")
        for k in self.k_list:
            try:
                self.params.with_k(k)
            except ValueError as exc:
                raise ConfigError(f"k_list entry {k}: {exc}") from exc

    def grid(self) -> np.ndarray:
        n = int(math.floor((self.gamma_max - self.gamma_min) / self.gamma_step + 1e-9)) + 1
        # rounding keeps grid values at their decimal spelling (0.695, not 0.6950000000000001)
        return np.round(self.gamma_min + self.gamma_step * np.arange(n), 12)

    def params_for(self, k: float) -> ModelParams:
        return self.params.with_k(k)

    def parity_for(self, p: ModelParams) -> Parity:
        return self.parity_override or default_parity(p.two_j, p.two_k)

    def n_threads(self) -> int:
        return self.threads or (os.cpu_count() or 1)

    def echo(self) -> dict:
        return {
            "omega": self.params.omega, "Omega": self.params.Omega, "N": self.params.N,
            "j": self.params.j, "k_list": list(self.k_list), "gamma_min": self.gamma_min,
            "gamma_max": self.gamma_max, "gamma_step": self.gamma_step,
            "methods": list(self.methods),
            "parity": self.parity_override.name.lower() if self.parity_override else "auto",
            "dicke_n_max": self.dicke_n_max,
        }


def _parse_value(key, raw, line):
    try:
        if key in ("omega", "Omega", "gamma_min", "gamma_max", "gamma_step"):
            return float(raw)
        if key in ("N", "dicke_n_max", "threads"):
            return int(raw)
        if key == "j":
            return float(raw) if raw else None
        if key == "k_list":
            return tuple(float(x) for x in raw.split(",") if x.strip())
        if key == "methods":
            return tuple(m.strip().lower() for m in raw.split(",") if m.strip())
        if key == "parity":
            return None if raw.lower() in ("", "auto") else Parity.parse(raw)
        return raw                                    # output_dir
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})", line) from exc


def parse_config(text: str) -> SweepConfig:
    """Parse and validate a sweep configuration (defaults: omega=1, Omega=2, N=18, j=N/2)."""
    values, where = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", lineno)
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {where[key]})", lineno)
        values[key] = _parse_value(key, raw, lineno)
        where[key] = lineno
    model_keys = {k: values[k] for k in ("omega", "Omega", "N", "j") if k in values}
    try:
        params = ModelParams(**model_keys)
    except ValueError as exc:
        raise ConfigError(str(exc), _first_line(where, model_keys)) from exc
    if "k_list" not in values:
        raise ConfigError("k_list is required")
    rest = {k: v for k, v in values.items() if k not in model_keys and k != "parity"}
    rest["parity_override"] = values.get("parity")
    try:
        return SweepConfig(params=params, **rest)
    except ConfigError as exc:
        # attach the line of the first key the message names, when there is one
        hits = [where[k] for k in sorted(where, key=len, reverse=True) if k in str(exc)]
        if hits and exc.line is None:
            raise ConfigError(str(exc), hits[0]) from exc
        raise


def _first_line(where, keys):
    lines = [where[k] for k in keys]
    return min(lines) if lines else None


def load_config(path) -> SweepConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


# -- orchestration --------------------------------------------------------------

@dataclass
class SweepOutput:
    config: SweepConfig
    rows: dict[tuple[str, float], list[GroundStateRecord]] = field(default_factory=dict)
    transitions: dict[float, TransitionEstimate | None] = field(default_factory=dict)

    def keys(self):
        return sorted(self.rows, key=_key_order)


def _key_order(key):
    method, k = key
    return (METHODS.index(method), k)


def _window(grid, gm):
    return [float(g) for g in grid if abs(g) < gm * (1 - 1e-12)]


def _closed_form_rows(method, cfg, k) -> list[GroundStateRecord]:
    p = cfg.params_for(k)
    parity = cfg.parity_for(p)
    rows = []
    for g in _window(cfg.grid(), gamma_cutoff(p)):
        try:
            if method == "mf":
                obs = mf_observables(g, p)
                rows.append(GroundStateRecord(g, obs["E"], obs["Jz"], obs["nu"], None))
            elif method == "csas":
                obs = csas_observables(g, parity, p)
                rows.append(GroundStateRecord(g, obs["E"], obs["Jz"], obs["nu"], None))
            else:
                m = minimize_sas(p, parity, gamma=g)
                rows.append(GroundStateRecord(g, m.energy, m.jz, m.nu, None))
        except SolverError as exc:
            raise type(exc)(f"method={method}, k={k}, gamma={g}: {exc}") from exc
    return rows


def _cell(cfg: SweepConfig, method: str, k: float) -> list[GroundStateRecord]:
    if method in ("mf", "csas", "sas"):
        return _closed_form_rows(method, cfg, k)
    p = cfg.params_for(k)
    dicke = DickeReference(n_max=cfg.dicke_n_max) if method == "dicke" else None
    try:
        return fidelity_curve(p, cfg.grid(), dicke=dicke)
    except SolverError as exc:
        raise type(exc)(f"method={method}, k={k}: {exc}") from exc


def compute_sweep(cfg: SweepConfig) -> SweepOutput:
    """Run every (method, k) cell; results are keyed, never ordered by completion."""
    cells = []
    for method in cfg.methods:
        if method == "dicke":
            cells.append(("dicke", math.inf))        # independent of k
        else:
            cells.extend((method, float(k)) for k in cfg.k_list)
    cells = sorted(set(cells), key=_key_order)

    def work(cell):
        method, k = cell
        return _cell(cfg, method, cfg.k_list[0] if method == "dicke" else k)

    if cfg.n_threads() > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=cfg.n_threads()) as pool:
            results = list(pool.map(work, cells))
    else:
        results = [work(c) for c in cells]

    out = SweepOutput(cfg, dict(zip(cells, results)))
    for (method, k), rows in out.rows.items():
        if method in ("exact", "dicke"):
            try:
                out.transitions[k] = locate_transition(rows)
            except NoDipError:
                out.transitions[k] = None
    return out


# -- writing ------------------------------------------------------------------

def csv_name(method: str, k: float) -> str:
    return "dicke.csv" if method == "dicke" else f"{method}_k{k_label(k)}.csv"


def _row_line(r: GroundStateRecord) -> str:
    fid = "" if r.fidelity is None else fmt(r.fidelity)
    return ",".join((fmt(r.gamma), fmt(r.energy0), fmt(r.jz), fmt(r.nu), fid))


def _transition_label(k):
    return "dicke" if math.isinf(k) else k_label(k)


def _write(path: Path, lines, written: list):
    written.append(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_outputs(out: SweepOutput, directory=None) -> list[Path]:
    """CSV files, transition summary and metadata; on any I/O failure the partial files are removed."""
    cfg = out.config
    d = Path(directory or cfg.output_dir)
    created_dir = not d.exists()
    written: list[Path] = []
    try:
        d.mkdir(parents=True, exist_ok=True)
        for key in out.keys():
            rows = out.rows[key]
            _write(d / csv_name(*key), [CSV_HEADER] + [_row_line(r) for r in rows], written)
        fid_keys = [key for key in out.keys() if key[0] in ("exact", "dicke")]
        if fid_keys:
            header = "gamma," + ",".join(
                "dicke" if m == "dicke" else f"k={k_label(k)}" for m, k in fid_keys)
            grid = cfg.grid()
            lines = [header]
            for i, g in enumerate(grid):
                lines.append(",".join([fmt(g)] + [fmt(out.rows[key][i].fidelity) for key in fid_keys]))
            _write(d / "fidelity.csv", lines, written)
            lines = [TRANSITION_HEADER]
            for k in sorted(out.transitions):
                t = out.transitions[k]
                cells = ("", "") if t is None else (fmt(t.gamma_star), fmt(t.fidelity_min))
                lines.append(",".join((_transition_label(k),) + cells))
            _write(d / "transitions.csv", lines, written)
        meta = {
            "code_version": __version__,
            "config": cfg.echo(),
            "grid_size": len(cfg.grid()),
            "critical": {k_label(k): {"gamma_c": gamma_critical(cfg.params_for(k)),
                                      "gamma_m": gamma_cutoff(cfg.params_for(k))}
                         for k in sorted(cfg.k_list)},
            "gamma_c_dicke": cfg.params.gamma_c_dicke,
            "files": {f"{m}:{_transition_label(k)}": csv_name(m, k) for m, k in out.keys()},
        }
        written.append(d / "metadata.json")
        (d / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                                         encoding="utf-8")
    except OSError:
        _cleanup(written, d if created_dir else None)
        raise
    return written


def _cleanup(paths, directory):
    for path in paths:
        try:
            path.unlink()
        except OSError:
            pass
    if directory is not None:
        shutil.rmtree(directory, ignore_errors=True)


def run_sweep(cfg: SweepConfig, directory=None) -> SweepOutput:
    """Compute every cell, then write the CSV outputs.

    Solver failures happen before anything is written; write failures
    remove whatever was already written.
    """
    out = compute_sweep(cfg)
    write_outputs(out, directory)
    return out


def _dat_lines(col, gammas, values):
    return [f"# gamma {col}"] + [f"{fmt(g)} {fmt(v)}" for g, v in zip(gammas, values)]


def emit_plot_data(out: SweepOutput, directory=None) -> list[Path]:
    """Two-column ``.dat`` files (one curve each) plus Dicke mean-field overlay curves."""
    if not out.rows:
        raise ValueError("sweep output is empty")
    d = Path(directory or out.config.output_dir) / "plot"
    written: list[Path] = []
    try:
        d.mkdir(parents=True, exist_ok=True)
        for method, k in out.keys():
            rows = out.rows[(method, k)]
            stem = "dicke" if method == "dicke" else f"{method}_k{k_label(k)}"
            gammas = [r.gamma for r in rows]
            for col in COLUMNS:
                if col == "fidelity" and method not in ("exact", "dicke"):
                    continue
                attr = "energy0" if col == "energy" else col
                _write(d / f"{stem}_{col}.dat",
                       _dat_lines(col, gammas, [getattr(r, attr) for r in rows]), written)
        # large-k mean-field curves of the ordinary Dicke model
        grid = out.config.grid()
        ref = [dicke_mf_observables(float(g), out.config.params) for g in grid]
        for col, key in (("energy", "E"), ("jz", "Jz"), ("nu", "nu")):
            _write(d / f"dicke_mf_{col}.dat", _dat_lines(col, grid, [r[key] for r in ref]), written)
    except OSError as exc:
        _cleanup(written, None)
        raise OSError(f"writing plot data under {d}: {exc}") from exc
    return written


def read_dat(path) -> tuple[list[float], list[float]]:
    xs, ys = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#") or not line.strip():
            continue
        x, y = line.split()
        xs.append(float(x))
        ys.append(float(y))
    return xs, ys


def critical_table(cfg: SweepConfig) -> list[tuple[float, float, float]]:
    return [(k, gamma_critical(cfg.params_for(k)), gamma_cutoff(cfg.params_for(k)))
            for k in sorted(cfg.k_list)]


__all__ = [
    "SweepConfig", "SweepOutput", "parse_config", "load_config", "compute_sweep",
    "write_outputs", "run_sweep", "emit_plot_data", "read_dat", "critical_table",
]
