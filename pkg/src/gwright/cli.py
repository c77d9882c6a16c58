"""Command-line interface.

Usage::

    gwright eval --params ml05.json --arg -1.0
    gwright density --params ml09.json --x 0.3 --x 1.5
    gwright moments --params ml05.json --d 2 --max-order 4
    gwright sample --params ml05.json --d 2 --n 1000 --seed 42 --out s.csv
    gwright hermite --params ml05.json --n 4
    gwright donsker --params ml05.json --eta 1,0 --phi1 0.3,0.2
    gwright check --suite all

``--params`` takes a JSON file or the name of a shipped family (gaussian,
ml05, ml09). Exit status: 0 success, 1 computational error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import GWrightError, ParameterError

__all__ = ["RunConfig", "UsageError", "parse_config", "run", "main"]

COMMANDS = ("eval", "density", "moments", "sample", "hermite", "donsker", "check")
QUADRATURE_COMMANDS = ("density", "donsker", "check")
SHIPPED = ("gaussian", "ml05", "ml09")
MAX_RTOL = 1e-2


class UsageError(Exception):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass
class RunConfig:
    command: str
    params_path: list = field(default_factory=list)
    families: dict = field(default_factory=dict)
    args: list = field(default_factory=list)
    points: list = field(default_factory=list)
    d: int = 1
    n: int = 0
    seed: int = 0
    out: str | None = None
    rtol: float = 1e-8
    route: str = "mixture"
    mixing: bool = False
    max_order: int = 4
    orthopoly: bool = False
    eta: tuple = (1.0,)
    phi1: tuple | None = None
    phi2: tuple | None = None
    M: float = 1.0
    suite: str = "all"
    threads: int | None = None


def _parser():
    parser = argparse.ArgumentParser(
        prog="gwright", description="Generalized Wright functions and measures.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p, params_help="parameter file or shipped family name"):
        p.add_argument("--params", action="append", help=params_help)
        p.add_argument("--rtol", type=float, default=None, help="relative tolerance")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("eval", help="Psi(arg)/K")
    common(p)
    p.add_argument("--arg", action="append", type=float, help="argument (repeatable)")

    p = sub.add_parser("density", help="measure or mixing density")
    common(p)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--x", action="append", help="comma-separated point (repeatable)")
    p.add_argument("--route", choices=("mixture", "foxh"), default="mixture")
    p.add_argument("--mixing", action="store_true", help="mixing density at scalar --x")

    p = sub.add_parser("moments", help="closed-form mixed moments")
    common(p)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--max-order", type=int, default=4)

    p = sub.add_parser("sample", help="draw samples to CSV")
    common(p)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=str, default=None)
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("hermite", help="Fox-Hermite polynomial coefficients")
    common(p)
    p.add_argument("--n", type=int, default=None, help="degree")
    p.add_argument("--orthopoly", action="store_true",
                   help="monic orthogonal polynomial of the 1-d measure instead")

    p = sub.add_parser("donsker", help="Donsker delta transforms")
    common(p)
    p.add_argument("--eta", default="1")
    p.add_argument("--phi1", default=None)
    p.add_argument("--phi2", default=None)
    p.add_argument("--M", type=float, default=1.0)

    p = sub.add_parser("check", help="run the oracle check suite")
    common(p, "family to check (repeatable; default: all shipped families)")
    p.add_argument("--suite", choices=("analytic", "mc", "all"), default="all")
    p.add_argument("--n", type=int, default=10 ** 5, help="Monte Carlo sample size")
    p.add_argument("--seed", type=str, default="0")
    return parser


def _resolve(path):
    p = Path(path)
    if p.exists():
        return p
    stem = p.name if p.suffix == ".json" else p.name + ".json"
    shipped = resources.files(__package__) / "data" / stem
    if p.parent == Path(".") and shipped.is_file():
        return Path(str(shipped))
    return None


def _vector(text, name, problems):
    try:
        v = tuple(float(t) for t in text.split(","))
    except ValueError:
        problems.append(f"--{name}: expected comma-separated numbers, got {text!r}")
        return None
    return v


def _seed(text, problems):
    try:
        s = int(text, 0)
    except (TypeError, ValueError):
        problems.append(f"--seed: expected an integer, got {text!r}")
        return 0
    if not 0 <= s < 2 ** 64:
        problems.append("--seed: must be a 64-bit unsigned integer")
    return s


def parse_config(argv):
    """Parse and validate ``argv``; raise :class:`UsageError` listing every problem."""
    from .wright import WrightParams, validate

    parser = _parser()
    problems = []
    ns, unknown = parser.parse_known_args(list(argv))
    for tok in unknown:
        problems.append(f"unknown argument {tok!r}")
    if ns.command is None:
        raise UsageError(problems + [f"missing command (one of {', '.join(COMMANDS)})"])
    cfg = RunConfig(command=ns.command)
    cmd = ns.command

    cfg.rtol = ns.rtol if ns.rtol is not None else (1e-6 if cmd in QUADRATURE_COMMANDS else 1e-8)
    if not 0 < cfg.rtol <= MAX_RTOL:
        problems.append(f"--rtol: must lie in (0, {MAX_RTOL:g}], got {cfg.rtol:g}")
    cfg.out = ns.out

    paths = ns.params or []
    if cmd == "check" and not paths:
        paths = list(SHIPPED)
    if not paths:
        problems.append("missing required flag --params")
    if cmd != "check" and len(paths) > 1:
        problems.append("--params: given more than once")
    for raw in paths:
        path = _resolve(raw)
        if path is None:
            problems.append(f"--params: file not found: {raw}")
            continue
        try:
            fam = validate(WrightParams.from_file(path))
        except ParameterError as exc:
            problems.extend(f"--params: {p}" for p in exc.problems)
            continue
        cfg.params_path.append(str(path))
        cfg.families[Path(raw).stem] = fam

    if cmd == "eval":
        if not ns.arg:
            problems.append("eval: missing required flag --arg")
        cfg.args = ns.arg or []
    elif cmd == "density":
        cfg.d, cfg.route, cfg.mixing = ns.d, ns.route, ns.mixing
        if ns.d < 1:
            problems.append("--d: must be >= 1")
        if not ns.x:
            problems.append("density: missing required flag --x")
        want = 1 if ns.mixing else ns.d
        for text in ns.x or []:
            v = _vector(text, "x", problems)
            if v is not None and len(v) != want:
                problems.append(f"--x: point {text!r} has {len(v)} coordinates, expected {want}")
            elif v is not None:
                cfg.points.append(v)
    elif cmd == "moments":
        cfg.d, cfg.max_order = ns.d, ns.max_order
        if ns.d < 1:
            problems.append("--d: must be >= 1")
        if ns.max_order < 0:
            problems.append("--max-order: must be >= 0")
    elif cmd == "sample":
        for flag in ("d", "n", "seed"):
            if getattr(ns, flag) is None:
                problems.append(f"sample: missing required flag --{flag}")
        if ns.d is not None and ns.d < 1:
            problems.append("--d: must be >= 1")
        if ns.n is not None and ns.n < 1:
            problems.append("--n: must be >= 1")
        cfg.d, cfg.n, cfg.threads = ns.d or 1, ns.n or 0, ns.threads
        if ns.seed is not None:
            cfg.seed = _seed(ns.seed, problems)
    elif cmd == "hermite":
        if ns.n is None:
            problems.append("hermite: missing required flag --n")
        elif ns.n < 0:
            problems.append("--n: must be >= 0")
        cfg.n, cfg.orthopoly = ns.n or 0, ns.orthopoly
    elif cmd == "donsker":
        cfg.eta = _vector(ns.eta, "eta", problems)
        cfg.phi1 = _vector(ns.phi1, "phi1", problems) if ns.phi1 else None
        cfg.phi2 = _vector(ns.phi2, "phi2", problems) if ns.phi2 else None
        cfg.M = ns.M
        dims = {len(v) for v in (cfg.eta, cfg.phi1, cfg.phi2) if v is not None}
        if len(dims) > 1:
            problems.append("donsker: --eta, --phi1 and --phi2 must have the same length")
        if cfg.eta is not None and not any(cfg.eta):
            problems.append("--eta: must be non-zero")
        if not ns.M > 0:
            problems.append("--M: must be > 0")
    elif cmd == "check":
        cfg.suite, cfg.n = ns.suite, ns.n
        cfg.seed = _seed(ns.seed, problems)
        if ns.n < 2:
            problems.append("--n: must be >= 2")
    if problems:
        raise UsageError(problems)
    return cfg


def _emit(cfg, payload):
    text = json.dumps(payload, indent=2) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _family(cfg):
    return next(iter(cfg.families.values()))


def _cmd_eval(cfg):
    from .wright import family_psi

    fam = _family(cfg)
    vals = [complex(family_psi(fam, a, rtol=cfg.rtol)) / fam.K for a in cfg.args]
    if len(vals) == 1:
        return {"value": vals[0].real}
    return {"args": cfg.args, "values": [v.real for v in vals]}


def _cmd_density(cfg):
    from .fhdam import fhdensity
    from .gwm import gwmeasure

    fam = _family(cfg)
    pts = np.array(cfg.points, dtype=float)
    if cfg.mixing:
        vals = np.atleast_1d(fhdensity(fam).density(pts[:, 0], rtol=min(cfg.rtol, 1e-10)))
    else:
        vals = np.atleast_1d(gwmeasure(fam, cfg.d).density(pts, route=cfg.route, rtol=cfg.rtol))
    if cfg.out:
        cols = ["tau"] if cfg.mixing else [f"x{i + 1}" for i in range(cfg.d)]
        np.savetxt(cfg.out, np.column_stack([pts, vals]), fmt="%.17g", delimiter=",",
                   header=",".join(cols + ["density"]), comments="")
        return None
    return {"points": pts.tolist(), "density": vals.tolist()}


def _cmd_moments(cfg):
    from .gwm import gwmeasure

    return gwmeasure(_family(cfg), cfg.d).moment_report(cfg.max_order)


def _cmd_sample(cfg):
    from .gwm import gwmeasure, write_samples_csv

    g = gwmeasure(_family(cfg), cfg.d, build_sampler=True)
    x = g.sample_batch(cfg.seed, cfg.n, threads=cfg.threads)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_samples_csv(x, fh)
    else:
        write_samples_csv(x, sys.stdout)
    return None


def _cmd_hermite(cfg):
    from .gwm import gwmeasure
    from .polys import fox_hermite, gram_schmidt_orthopoly

    fam = _family(cfg)
    if cfg.orthopoly:
        poly = gram_schmidt_orthopoly(gwmeasure(fam, 1), cfg.n)
    else:
        poly = fox_hermite(fam, cfg.n)
    return {"degree": poly.degree, "coeffs": [float(c) for c in poly.coeffs]}


def _cmd_donsker(cfg):
    from .donsker import PairingData, donsker_report

    pd = PairingData.from_vectors(cfg.eta, cfg.phi1, cfg.phi2)
    return donsker_report(_family(cfg), pd, M=cfg.M)


def _cmd_check(cfg):
    from .oracles import run_suite

    records = run_suite(cfg.families, suite=cfg.suite, n=cfg.n, seed=cfg.seed)
    return records


_DISPATCH = {
    "eval": _cmd_eval, "density": _cmd_density, "moments": _cmd_moments,
    "sample": _cmd_sample, "hermite": _cmd_hermite, "donsker": _cmd_donsker,
    "check": _cmd_check,
}


def _origin(exc):
    """Innermost package module the error came from, e.g. ``gwright.foxh``."""
    name = __name__
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith("gwright") and mod != "gwright.errors":
            name = mod
    return name


def run(config):
    """Execute a parsed :class:`RunConfig`; return the exit code."""
    try:
        payload = _DISPATCH[config.command](config)
    except (GWrightError, ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"error: {_origin(exc)}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if payload is not None:
        _emit(config, payload)
    if config.command == "check" and not all(r["pass"] for r in payload):
        failed = sum(not r["pass"] for r in payload)
        print(f"check: {failed} of {len(payload)} comparisons failed", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        _parser().print_usage(sys.stderr)
        for p in exc.problems:
            print(f"gwright: error: {p}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
