"""Command-line entry point: ``kdicke {sweep,critical,fidelity,validate}``.

Exit codes: 0 success, 1 configuration error, 2 solver error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .errors import ConfigError, SolverError
from .sweep import critical_table, emit_plot_data, fmt, k_label, load_config, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3
log = logging.getLogger("kdicke")


def _config(args):
    cfg = load_config(args.config)
    changes = {}
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        changes["threads"] = args.threads
    if getattr(args, "output_dir", None):
        changes["output_dir"] = args.output_dir
    return dataclasses.replace(cfg, **changes) if changes else cfg


def _print_transitions(out):
    print("k,gamma_star,fidelity_min")
    for k in sorted(out.transitions):
        t = out.transitions[k]
        label = "dicke" if k == float("inf") else k_label(k)
        print(f"{label},{fmt(t.gamma_star)},{fmt(t.fidelity_min)}" if t else f"{label},,")


def cmd_sweep(args) -> int:
    cfg = _config(args)
    out = run_sweep(cfg)
    emit_plot_data(out)
    log.info("wrote %d curves to %s", len(out.rows), cfg.output_dir)
    if out.transitions:
        _print_transitions(out)
    return EXIT_OK


def cmd_critical(args) -> int:
    cfg = _config(args)
    print("k,gamma_c,gamma_m")
    for k, gc, gm in critical_table(cfg):
        print(f"{k_label(k)},{fmt(gc)},{fmt(gm)}")
    print(f"dicke,{fmt(cfg.params.gamma_c_dicke)},inf")
    return EXIT_OK


def cmd_fidelity(args) -> int:
    cfg = _config(args)
    methods = tuple(m for m in cfg.methods if m in ("exact", "dicke")) or ("exact",)
    out = run_sweep(dataclasses.replace(cfg, methods=methods))
    _print_transitions(out)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import run_all
    results = run_all()
    for r in results:
        print(("PASS" if r.ok else "FAIL") + f"  {r.name}: {r.detail}")
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_SOLVER


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kdicke", description="k-Dicke model sweeps and checks")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)
    for name, fn, help_ in (("sweep", cmd_sweep, "run every configured method and write CSV/.dat"),
                            ("critical", cmd_critical, "print gamma_c and gamma_m per k"),
                            ("fidelity", cmd_fidelity, "exact fidelity sweeps and transition points")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("config", help="key=value configuration file")
        sp.add_argument("--threads", type=int, default=None, help="worker cap (default: config or CPU count)")
        if name != "critical":
            sp.add_argument("--output-dir", default=None, help="override output_dir")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("validate", help="run the internal oracle suite")
    sp.add_argument("--threads", type=int, default=None, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
