"""Command-line front end.

Every subcommand prints one JSON document on standard output; ``scan`` writes
a CSV table (``param,g1,g2,admissibility_margin``) instead.

Exit status: 0 success, 2 invalid arguments, 3 numerical failure,
4 admissibility violation.

    bombieri sigma42 --steps 20000 --tol 1e-7
    bombieri hessian --variant L --mu -0.1 --nu 0 --M inf
    bombieri scan sigma24 --grid 100 --out sigma24.csv
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .admissibility import DEFAULT_GRID, check_admissible
from .closed_form import criterion, sigma32
from .errors import AdmissibilityError, DomainError, NumericalError
from .integrator import METHODS, IntegratorOptions
from .oracle import ControlSolverOptions, fd_gradient, fd_hessian
from .problem import ProblemSpec, Variant
from .solver import PROBLEMS, RootScanConfig, scan, solve
from .variational import hessian_of_F

__all__ = ["RunRecord", "main", "run"]

SIG_DIGITS = 12
DEFAULT_STEPS = 20000
DEFAULT_ORACLE_STEPS = 2000
DEFAULT_TOL = 1e-7
DEFAULT_SCAN_POINTS = 200

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_ADMISSIBILITY = 0, 2, 3, 4


def _fmt(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def _normalize(obj):
    """Round floats to the printed precision; non-finite floats become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float) or hasattr(obj, "__float__"):
        x = float(obj)
        return float(_fmt(x)) if math.isfinite(x) else _fmt(x)
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass(frozen=True)
class RunRecord:
    command: str
    params: dict
    result: dict
    integrator: dict = field(default_factory=dict)
    wall_time: float = 0.0
    tool_version: str = __version__

    @classmethod
    def create(cls, command, params, result, integrator=None, wall_time=0.0) -> "RunRecord":
        return cls(
            command=command,
            params=_normalize(params),
            result=_normalize(result),
            integrator=_normalize(integrator or {}),
            wall_time=_normalize(wall_time),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--steps", type=_positive_int, default=None,
                        help=f"integrator steps over [0, T] (default {DEFAULT_STEPS}; "
                             f"{DEFAULT_ORACLE_STEPS} for oracle-verify)")
    common.add_argument("--method", choices=METHODS, default="rk4", help="integrator (default rk4)")
    common.add_argument("--json", action="store_true", help="structured output (always on; kept for scripts)")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")

    rootfind = argparse.ArgumentParser(add_help=False)
    rootfind.add_argument("--tol", type=_float, default=DEFAULT_TOL, help=f"bisection tolerance (default {DEFAULT_TOL})")
    rootfind.add_argument("--grid", type=_positive_int, default=DEFAULT_SCAN_POINTS,
                          help=f"scan points (default {DEFAULT_SCAN_POINTS})")
    rootfind.add_argument("--interval", type=_float, nargs=2, metavar=("LO", "HI"), default=None,
                          help="scan interval (default: the problem's admissible range)")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--variant", default="L", help="L | sigma24 | sigma34 | m0 (default L)")
    params.add_argument("--mu", type=_float, default=0.0)
    params.add_argument("--nu", type=_float, default=0.0)
    params.add_argument("--M", type=_float, default=math.inf, help="bound M >= 1; 'inf' for the class S")

    parser = argparse.ArgumentParser(prog="bombieri", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sigma32", parents=[common, rootfind], help="sigma_32 in closed form and by root finding")
    for name in ("sigma42", "sigma24", "sigma34", "m0"):
        sub.add_parser(name, parents=[common, rootfind], help=f"locate {name}")
    sub.add_parser("hessian", parents=[common, params], help="Hessian of F at the origin")
    dc = sub.add_parser("domain-check", parents=[common, params], help="admissibility of the base trajectory")
    dc.add_argument("--grid", type=_positive_int, default=DEFAULT_GRID, help=f"t-grid size (default {DEFAULT_GRID})")
    ov = sub.add_parser("oracle-verify", parents=[common, params],
                        help="finite-difference Hessian of the brute-force simulation vs the variational one")
    ov.add_argument("--h", type=_float, default=1e-3, help="difference step (default 1e-3)")
    ov.add_argument("--coarse-grid", type=_positive_int, default=64, help="control search grid (default 64)")
    sc = sub.add_parser("scan", parents=[common, rootfind], help="CSV table of g1, g2 and admissibility margin")
    sc.add_argument("problem", choices=sorted(PROBLEMS))
    return parser


def _spec(args) -> ProblemSpec:
    try:
        variant = Variant.parse(args.variant)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    return ProblemSpec(variant, mu=args.mu, nu=args.nu, M=args.M)


def _integ(args, default_steps=DEFAULT_STEPS) -> IntegratorOptions:
    return IntegratorOptions(args.method, args.steps or default_steps)


def _require_admissible(spec: ProblemSpec):
    report = check_admissible(spec)
    if not report.admissible:
        raise AdmissibilityError(
            f"{spec.as_dict()} is not admissible (min_gap={report.min_gap:.3e}, "
            f"min_abs_huu={report.min_abs_huu:.3e}, t={report.worst_t:.6g})"
        )


def _cfg(args) -> RootScanConfig:
    interval = tuple(args.interval) if args.interval else None
    return RootScanConfig(interval, args.grid, args.tol, _integ(args))


def _execute(args) -> RunRecord | list:
    cmd = args.command
    t0 = time.perf_counter()
    if cmd in ("sigma32", "sigma42", "sigma24", "sigma34", "m0"):
        cfg = _cfg(args)
        res = solve(cmd, cfg).as_dict()
        if cmd == "sigma32":
            exact = sigma32()
            res["closed_form"] = exact
            res["closed_form_deviation"] = abs(res["value"] - exact)
        settings = {"tol": cfg.bisect_tol, "grid": cfg.scan_points,
                    "interval": list(cfg.scan_interval or PROBLEMS[cmd].interval)}
        return RunRecord.create(cmd, settings, res, asdict(cfg.integ), time.perf_counter() - t0)
    if cmd == "scan":
        return scan(args.problem, _cfg(args), with_margin=True)
    spec = _spec(args)
    if cmd == "domain-check":
        res = check_admissible(spec, args.grid).as_dict()
        return RunRecord.create(cmd, spec.as_dict(), res, {}, time.perf_counter() - t0)
    if cmd == "hessian":
        _require_admissible(spec)
        integ = _integ(args)
        res = hessian_of_F(spec, integ).as_dict()
        if spec.variant is Variant.LFUNCTIONAL and spec.nu == 0.0:
            res["closed_form_fpp"] = criterion(spec.mu, spec.M).fpp
        return RunRecord.create(cmd, spec.as_dict(), res, asdict(integ), time.perf_counter() - t0)
    if cmd == "oracle-verify":
        _require_admissible(spec)
        integ = _integ(args, DEFAULT_ORACLE_STEPS)
        opts = ControlSolverOptions(coarse_grid=args.coarse_grid)
        fd = fd_hessian(spec, args.h, integ, opts)
        var = hessian_of_F(spec, integ)
        grad = fd_gradient(spec, args.h, integ, opts)
        diff = max(abs(fd.fpp - var.fpp), abs(fd.fqq - var.fqq), abs(fd.fpq - var.fpq))
        res = {"fd": fd.as_dict(), "variational": var.as_dict(), "max_abs_diff": diff,
               "gradient": list(grad), "h": args.h}
        return RunRecord.create(cmd, spec.as_dict(), res, asdict(integ), time.perf_counter() - t0)
    raise AssertionError(cmd)


def _write_csv(rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["param", "g1", "g2", "admissibility_margin"])
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = _execute(args)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except AdmissibilityError as exc:
        print(f"admissibility violation: {exc}", file=stderr)
        return EXIT_ADMISSIBILITY
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    stream = open(args.out, "w", newline="") if args.out else stdout
    try:
        if isinstance(out, RunRecord):
            stream.write(out.to_json() + "\n")
        else:
            _write_csv(out, stream)
    finally:
        if args.out:
            stream.close()
    return EXIT_OK


def main():
    sys.exit(run())
