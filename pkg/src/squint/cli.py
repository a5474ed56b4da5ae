"""Command-line front end: deterministic CSV/JSON emission for every result.

Subcommands
-----------
signal              fringe scan: mean product signal and its noise vs phase
resolve             one resolution computation (JSON report)
sweep               resolution along a parameter grid (CSV/JSON table)
optimize-imbalance  best recombiner imbalance at fixed gain (JSON report)
oracle-check        covariance engine vs Fock oracle agreement (JSON report)

Conventions: all angles are radians unless --degrees is given, which
converts the values typed on the command line (config files stay radians);
phase grids cover [min, max) half-open so periodic scans have no duplicate
endpoint, while parameter grids include both ends; data values are printed
with 12 significant digits and a decimal point; identical inputs give
byte-identical output.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure (non-convergence, oracle deviation, cutoff too small).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .fock import equivalence_grid
from .interferometer import InterferometerConfig, evaluate
from .resolution import (
    SWEEP_PARAMETERS,
    modified_resolution,
    optimize_delta2,
    refine_working_point,
    standard_resolution,
    sweep,
)

__all__ = ["RunConfig", "main"]

_DEVICE_FIELDS = ("G", "xi", "alpha1", "beta1", "alpha2", "beta2", "delta1", "delta2")
# Device fields measured in radians (everything but the dimensionless gain).
_ANGLE_FIELDS = _DEVICE_FIELDS[1:]


@dataclass(frozen=True)
class RunConfig:
    """Full description of one CLI run; JSON round-trips to an equal value."""

    interferometer: InterferometerConfig
    criterion: str = "modified"
    working_point: float = math.pi / 2
    phi_min: float = 0.0
    phi_max: float = 2 * math.pi
    phi_points: int = 1000
    param: str = "G"
    param_min: float = 0.5
    param_max: float = 8.0
    param_points: int = 60
    log_grid: bool = True
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.criterion not in ("standard", "modified"):
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.param not in SWEEP_PARAMETERS:
            raise ValueError(f"unknown sweep parameter {self.param!r}")
        for lo, hi, pts, what in ((self.phi_min, self.phi_max, self.phi_points, "phi"),
                                  (self.param_min, self.param_max, self.param_points, "param")):
            if not hi > lo:
                raise ValueError(f"{what} grid must be strictly increasing (max > min)")
            if pts < 2:
                raise ValueError(f"{what} grid needs at least 2 points")
        if self.log_grid and self.param_min <= 0:
            raise ValueError("log-spaced grids need a positive minimum")

    def to_dict(self) -> dict:
        return {
            "interferometer": dataclasses.asdict(self.interferometer),
            "criterion": self.criterion,
            "working_point": self.working_point,
            "phi_grid": {"min": self.phi_min, "max": self.phi_max, "points": self.phi_points},
            "param_grid": {"name": self.param, "min": self.param_min,
                           "max": self.param_max, "points": self.param_points,
                           "log": self.log_grid},
            "out": self.out,
            "format": self.format,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {"interferometer", "criterion", "working_point", "phi_grid",
                 "param_grid", "out", "format"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        device = dict(data.get("interferometer", {}))
        bad = set(device) - set(_DEVICE_FIELDS)
        if bad:
            raise ValueError(f"unknown interferometer keys: {sorted(bad)}")
        device.setdefault("G", 1.0)
        phi = data.get("phi_grid", {})
        par = data.get("param_grid", {})
        defaults = cls(InterferometerConfig(G=1.0))
        return cls(
            interferometer=InterferometerConfig(**device),
            criterion=data.get("criterion", defaults.criterion),
            working_point=data.get("working_point", defaults.working_point),
            phi_min=phi.get("min", defaults.phi_min),
            phi_max=phi.get("max", defaults.phi_max),
            phi_points=int(phi.get("points", defaults.phi_points)),
            param=par.get("name", defaults.param),
            param_min=par.get("min", defaults.param_min),
            param_max=par.get("max", defaults.param_max),
            param_points=int(par.get("points", defaults.param_points)),
            log_grid=bool(par.get("log", defaults.log_grid)),
            out=data.get("out", None),
            format=data.get("format", defaults.format),
        )

    def phi_grid(self) -> np.ndarray:
        """Half-open phase grid [phi_min, phi_max)."""
        return np.linspace(self.phi_min, self.phi_max, self.phi_points, endpoint=False)

    def param_grid(self) -> np.ndarray:
        """Closed parameter grid [param_min, param_max]."""
        if self.log_grid:
            return np.geomspace(self.param_min, self.param_max, self.param_points)
        return np.linspace(self.param_min, self.param_max, self.param_points)


def fmt(value) -> str:
    """Render one CSV cell: 12 significant digits, decimal point kept."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return f"{int(value)}.0"
    x = float(value)
    if not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    s = f"{x:.12g}"
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _json_num(x):
    """JSON data value at 12 significant digits; non-finite becomes null."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def _table_text(cfg: RunConfig, columns, rows) -> str:
    if cfg.format == "csv":
        lines = [",".join(columns)]
        lines += [",".join(fmt(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    payload = {
        "config": cfg.to_dict(),
        "rows": [
            {c: (v if isinstance(v, (bool, np.bool_)) else _json_num(v))
             for c, v in zip(columns, row)}
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _result_dict(res) -> dict:
    return {
        "criterion": res.criterion,
        "working_point": _json_num(res.working_point),
        "delta_phi": _json_num(res.delta_phi),
        "kappa": _json_num(res.kappa),
        "mean_N": _json_num(res.mean_N),
        "iterations": res.iterations,
        "converged": res.converged,
        "message": res.message,
    }


def cmd_signal(cfg: RunConfig) -> int:
    columns = ("phi", "mean_P", "sqrt_second_moment", "sigma", "mean_N")
    rows = []
    for phi in cfg.phi_grid():
        st = evaluate(cfg.interferometer, float(phi))
        rows.append((float(phi), st.mean, math.sqrt(st.second_moment),
                     st.sigma, st.mean_photons))
    _emit(_table_text(cfg, columns, rows), cfg.out)
    return 0


def cmd_resolve(cfg: RunConfig, refine_phi: bool = False) -> int:
    solver = modified_resolution if cfg.criterion == "modified" else standard_resolution
    phi = cfg.working_point
    if refine_phi:
        phi = refine_working_point(cfg.interferometer, phi)
    res = solver(cfg.interferometer, phi=phi)
    payload = {"config": cfg.to_dict(), "result": _result_dict(res)}
    if refine_phi:
        payload["refined_working_point"] = _json_num(phi)
    _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    return 0 if res.converged else 2


def cmd_sweep(cfg: RunConfig) -> int:
    table = sweep(cfg.interferometer, cfg.param, cfg.param_grid(),
                  criterion=cfg.criterion, phi=cfg.working_point)
    columns = ("param", "G", "mean_N", "delta_phi", "kappa", "converged", "four_over_N")
    rows = [(r.param, r.G, r.mean_N, r.delta_phi, r.kappa, r.converged,
             4.0 / r.mean_N if r.mean_N > 0 else math.inf)
            for r in table.rows]
    _emit(_table_text(cfg, columns, rows), cfg.out)
    return 0 if all(r.converged for r in table.rows) else 2


def cmd_optimize_imbalance(cfg: RunConfig) -> int:
    opt = optimize_delta2(cfg.interferometer.G, criterion=cfg.criterion,
                          phi=cfg.working_point)
    payload = {
        "config": cfg.to_dict(),
        "result": {
            "delta2_opt": _json_num(opt.delta2),
            "kappa_opt": _json_num(opt.kappa),
            "delta_phi": _json_num(opt.delta_phi),
            "mean_N": _json_num(opt.mean_N),
            "converged": opt.converged,
            "unimodal": opt.unimodal,
            "message": opt.message,
        },
        "profile": [[_json_num(d), _json_num(k)] for d, k in opt.profile],
    }
    _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    return 0 if opt.converged and opt.unimodal else 2


def cmd_oracle_check(cfg: RunConfig, n_max: int | None, tolerance: float) -> int:
    report = equivalence_grid(n_max=n_max, tolerance=tolerance)
    payload = {
        "config": cfg.to_dict(),
        "tolerance": _json_num(report.tolerance),
        "n_cases": report.n_cases,
        "max_deviation": _json_num(report.max_deviation),
        "worst_case": dataclasses.asdict(report.worst) if report.worst else None,
        "n_failures": len(report.failures),
        "cutoff_errors": [{"G": _json_num(g), "error": msg}
                          for g, msg in report.cutoff_errors],
        "passed": report.passed,
    }
    _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    for g, msg in report.cutoff_errors:
        print(f"oracle-check: G={g:g}: {msg}", file=sys.stderr)
    return 0 if report.passed else 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 1 (2 is reserved for numerics)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_device_flags(p: _Parser) -> None:
    p.add_argument("-G", "--gain", dest="G", type=float, help="squeezer gain")
    p.add_argument("--xi", type=float, help="pump phase (angle)")
    for name in ("alpha1", "beta1", "alpha2", "beta2"):
        p.add_argument(f"--{name}", type=float, help=f"loss angle {name}")
    p.add_argument("--delta1", type=float, help="splitter imbalance (angle)")
    p.add_argument("--delta2", type=float, help="recombiner imbalance (angle)")


def _add_common_flags(p: _Parser) -> None:
    p.add_argument("--config", help="JSON config file (flags override its values)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--degrees", action="store_true",
                   help="interpret angles given on the command line in degrees")


def _build_parser() -> _Parser:
    parser = _Parser(prog="squint",
                     description="Squeezed-vacuum interferometry: signals, "
                                 "resolution limits, sweeps, and oracle checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("signal", help="fringe scan of the product signal")
    _add_device_flags(p)
    _add_common_flags(p)
    p.add_argument("--phi-min", type=float, help="grid start (angle, default 0)")
    p.add_argument("--phi-max", type=float, help="grid end, excluded (angle, default 2 pi)")
    p.add_argument("--points", type=int, help="grid size (default 1000)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")

    p = sub.add_parser("resolve", help="one resolution computation")
    _add_device_flags(p)
    _add_common_flags(p)
    p.add_argument("--criterion", choices=("standard", "modified"))
    p.add_argument("--phi", type=float, help="working point (angle, default pi/2)")
    p.add_argument("--refine-phi", action="store_true",
                   help="re-locate the noise minimum near the working point first")

    p = sub.add_parser("sweep", help="resolution along a parameter grid")
    _add_device_flags(p)
    _add_common_flags(p)
    p.add_argument("--criterion", choices=("standard", "modified"))
    p.add_argument("--phi", type=float, help="working point (angle, default pi/2)")
    p.add_argument("--param", choices=SWEEP_PARAMETERS, help="swept parameter (default G)")
    p.add_argument("--min", dest="param_min", type=float, help="grid minimum")
    p.add_argument("--max", dest="param_max", type=float, help="grid maximum")
    p.add_argument("--points", type=int, help="grid size (default 60)")
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--log", dest="log_grid", action="store_true", default=None,
                      help="log-spaced grid (default)")
    grid.add_argument("--linear", dest="log_grid", action="store_false", default=None,
                      help="linearly spaced grid")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")

    p = sub.add_parser("optimize-imbalance", help="best recombiner imbalance at fixed gain")
    _add_device_flags(p)
    _add_common_flags(p)
    p.add_argument("--criterion", choices=("standard", "modified"))
    p.add_argument("--phi", type=float, help="working point (angle, default pi/2)")

    p = sub.add_parser("oracle-check", help="engine vs Fock oracle on the validation grid")
    _add_common_flags(p)
    p.add_argument("--n-max", type=int, help="override the pair cutoff (tiny values error)")
    p.add_argument("--tolerance", type=float, default=1e-8,
                   help="pass threshold on the max absolute deviation")
    return parser


def _build_runconfig(args) -> RunConfig:
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = RunConfig.from_dict(json.load(fh))
    else:
        cfg = RunConfig(InterferometerConfig(G=1.0))

    to_rad = math.pi / 180.0 if args.degrees else 1.0

    device = {}
    for name in _DEVICE_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            device[name] = value * to_rad if name in _ANGLE_FIELDS else value
    if device:
        cfg = dataclasses.replace(
            cfg, interferometer=dataclasses.replace(cfg.interferometer, **device))

    param = getattr(args, "param", None)
    param_is_angle = (param or cfg.param) != "G"
    updates = {}
    for attr, field_name, is_angle in (
            ("criterion", "criterion", False),
            ("phi", "working_point", True),
            ("phi_min", "phi_min", True),
            ("phi_max", "phi_max", True),
            ("points", None, False),  # resolved below: signal vs sweep
            ("param", "param", False),
            ("param_min", "param_min", param_is_angle),
            ("param_max", "param_max", param_is_angle),
            ("log_grid", "log_grid", False),
            ("out", "out", False),
            ("format", "format", False)):
        value = getattr(args, attr, None)
        if value is None or field_name is None:
            continue
        updates[field_name] = value * to_rad if (is_angle and args.degrees) else value
    points = getattr(args, "points", None)
    if points is not None:
        updates["phi_points" if args.command == "signal" else "param_points"] = points
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _build_runconfig(args)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        print(f"squint: config error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "signal":
            return cmd_signal(cfg)
        if args.command == "resolve":
            return cmd_resolve(cfg, refine_phi=args.refine_phi)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "optimize-imbalance":
            return cmd_optimize_imbalance(cfg)
        if args.command == "oracle-check":
            return cmd_oracle_check(cfg, args.n_max, args.tolerance)
    except OSError as exc:
        print(f"squint: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"squint: invalid configuration: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
