"""
Command-line front end.

    mirs compute --family pj --alpha 0.333333 --N 24 --out pj.csv
    mirs construct --family harvey --out harvey.json
    mirs theta --gamma 2 --depth 8
    mirs fit --csv pj.csv
    mirs verify kron-product --N 10
    mirs report --family pj --N 48

Exit codes: 0 ok, 2 configuration error, 3 operational error, 4 failed check.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import constructions as cons
from .analysis import fit_exponent, jsr_bounds, regularity_report
from .diophantine import build_theta
from .engine import Certificate, EngineConfig, MirsResult, compute_mirs, compute_mirs_pj, pj_structure
from .errors import ConfigError, DegenerateInput, MirsError
from .serialize import (
    matrix_set_to_dict,
    read_matrix_set,
    read_sequence_csv,
    result_csv,
    result_metadata,
)
from .verification import CHECKS, run_check

EXIT_OK, EXIT_CONFIG, EXIT_OPERATIONAL, EXIT_CHECK = 0, 2, 3, 4
FAMILIES = ("pj", "harvey", "lift", "gz")


@dataclass
class ExperimentConfig:
    family: Optional[str] = None
    set_path: Optional[str] = None
    alpha: Optional[float] = None
    theta: Optional[float] = None
    grid_points: int = 16
    horizon: int = 24
    engine: EngineConfig = field(default_factory=EngineConfig)
    mode: str = "auto"
    analyses: List[str] = field(default_factory=list)
    out: Optional[str] = None

    def validate(self):
        if (self.family is None) == (self.set_path is None):
            raise ConfigError("give exactly one of --family or --set")
        if self.horizon < 1:
            raise ConfigError("--N must be at least 1")
        if self.mode not in ("auto", "frontier", "pj"):
            raise ConfigError(f"unknown mode {self.mode!r}")

    def matrix_set(self):
        if self.set_path is not None:
            return read_matrix_set(self.set_path)
        alpha = self.alpha
        if alpha is None:
            alpha = 0.5 if self.family == "gz" else 1 / 3
        return cons.named_family(self.family, alpha=alpha, theta=self.theta,
                                 grid_points=self.grid_points)


def _emit(text: str, out: Optional[str]):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json(obj) -> str:
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer, np.bool_)):
            return o.item()
        return str(o)
    return json.dumps(obj, indent=2, default=default) + "\n"


def _config_from_args(args) -> ExperimentConfig:
    eng = EngineConfig(capacity=args.capacity, beam_width=args.beam_width,
                       dedup_tol=args.dedup_tol, exact_or_fail=args.exact_or_fail)
    cfg = ExperimentConfig(args.family, args.set, args.alpha, args.theta, args.grid_points,
                           args.N, eng, args.mode, out=getattr(args, "out", None))
    cfg.validate()
    return cfg


def run_compute(cfg: ExperimentConfig) -> MirsResult:
    mset = cfg.matrix_set()
    mode = cfg.mode
    if mode == "auto":
        try:
            pj_structure(mset)
            mode = "pj"
        except DegenerateInput:
            mode = "frontier"
    if mode == "pj":
        return compute_mirs_pj(mset, cfg.horizon)
    return compute_mirs(mset, cfg.horizon, cfg.engine)


def cmd_compute(args) -> int:
    cfg = _config_from_args(args)
    res = run_compute(cfg)
    _emit(result_csv(res), cfg.out)
    if cfg.out not in (None, "-"):
        meta = result_metadata(res)
        meta["config"] = {k: v for k, v in asdict(cfg).items() if k != "engine"}
        meta["config"]["engine"] = asdict(cfg.engine)
        Path(cfg.out).with_suffix(".json").write_text(_json(meta))
    return EXIT_OK


def cmd_construct(args) -> int:
    cfg = _config_from_args(args)
    mset = cfg.matrix_set()
    if args.kron_power and args.kron_power > 1:
        mset = cons.kron_power_set(mset, args.kron_power)
    if args.lift:
        mset = cons.pair_lift(mset).as_set()
    _emit(_json(matrix_set_to_dict(mset)), cfg.out)
    return EXIT_OK


def cmd_theta(args) -> int:
    if not args.gamma >= 1:
        raise ConfigError(f"--gamma must be >= 1, got {args.gamma}")
    if args.depth < 2:
        raise ConfigError("--depth must be at least 2")
    cf = build_theta(args.gamma, args.depth, digits=args.digits, kappa_range=args.kappa_range)
    _emit(_json(cf.to_json()), args.out)
    return EXIT_OK


def _sequence(args) -> MirsResult:
    if args.csv:
        values, certs = read_sequence_csv(args.csv)
        return MirsResult(Path(args.csv).stem, len(values), np.array(values),
                          [Certificate(c.split("[")[0]) for c in certs],
                          [()] * len(values), {"mode": "csv"})
    return run_compute(_config_from_args(args))


def cmd_fit(args) -> int:
    res = _sequence(args)
    fit = fit_exponent(res, tuple(args.window) if args.window else None)
    _emit(_json({k: v for k, v in asdict(fit).items() if k != "points"}), args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    res = _sequence(args)
    rep = {"sequence": result_metadata(res)}
    rep["fit"] = {k: v for k, v in asdict(fit_exponent(res)).items() if k != "points"}
    rep["regularity"] = asdict(regularity_report(res, args.multipliers))
    if not args.csv and args.jsr_depth:
        jb = jsr_bounds(_config_from_args(args).matrix_set(), args.jsr_depth)
        rep["jsr"] = {"lower": jb.lower, "upper": jb.upper}
    _emit(_json(rep), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    params = {"N": args.N, "family": args.family, "beta": args.beta, "delta": args.delta,
              "count": args.count, "depth": args.depth, "k": args.k}
    accepted = set(inspect.signature(CHECKS[args.name].impl).parameters)
    unknown = [k for k, v in params.items() if v is not None and k not in accepted]
    if unknown:
        raise ConfigError(f"check {args.name!r} does not take {', '.join('--' + u for u in unknown)}")
    rep = run_check(args.name, **params)
    _emit(_json(rep), args.out)
    return EXIT_OK if rep["pass"] else EXIT_CHECK


def _add_source(p, default_n=24):
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--set", help="matrix set JSON file")
    p.add_argument("--alpha", type=float)
    p.add_argument("--theta", type=float, help="rotation angle (default: built from alpha)")
    p.add_argument("--grid-points", type=int, default=16)
    p.add_argument("--N", type=int, default=default_n)
    p.add_argument("--mode", default="auto", choices=("auto", "frontier", "pj"))
    p.add_argument("--capacity", type=int, default=2_000_000)
    p.add_argument("--beam-width", type=int, default=100_000)
    p.add_argument("--dedup-tol", type=float, default=1e-10)
    p.add_argument("--exact-or-fail", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mirs", description=__doc__.split("\n\n")[0].strip())
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute a_1..a_N as CSV")
    _add_source(p)
    p.add_argument("--out", help="CSV path (a .json sidecar is written next to it)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("construct", help="write a named family as matrix-set JSON")
    _add_source(p)
    p.add_argument("--kron-power", type=int)
    p.add_argument("--lift", action="store_true", help="apply the two-matrix lift")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("theta", help="continued-fraction angle as JSON")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--digits", type=int, default=120)
    p.add_argument("--kappa-range", type=int, default=100_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_theta)

    for name, func, hlp in (("fit", cmd_fit, "fit a growth exponent"),
                            ("report", cmd_report, "fit, regularity and JSR summary")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--csv", help="sequence CSV written by compute")
        _add_source(p)
        p.add_argument("--out")
        if name == "fit":
            p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
        else:
            p.add_argument("--multipliers", type=int, nargs="+", default=[2, 3, 4])
            p.add_argument("--jsr-depth", type=int, default=0)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run a named check; exit 4 if it fails")
    p.add_argument("name", choices=sorted(CHECKS))
    for flag, typ in (("--N", int), ("--family", str), ("--beta", float), ("--delta", float),
                      ("--count", int), ("--depth", int), ("--k", int)):
        p.add_argument(flag, type=typ)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("fit", "report") and args.csv and (args.family or args.set):
        parser.error("give either --csv or a set source, not both")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"mirs: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MirsError as exc:
        print(f"mirs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL


if __name__ == "__main__":
    sys.exit(main())
