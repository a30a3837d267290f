"""Command-line front end.

Subcommands: ``reflect``, ``sweep``, ``zeros``, ``domain-curve`` and
``dispersion-grid``.  Exit codes: 0 on success, 2 on invalid input, 3 when
the solver fails in single-point mode.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

from . import __version__
from .asymptotics import longwave_reflectance
from .errors import ParameterError, PlasmaReflError
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .reflection import ReflectionResult, flow_diagnostics, reflect
from .spectrum import count_zeros
from .sweep import (
    GridRange,
    SweepSpec,
    _status_of,
    columns_for,
    gnuplot_script,
    run_sweep,
    to_csv,
    to_json_rows,
)

log = logging.getLogger("plasmarefl")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3

# options that take a value, keyed by argparse dest; used for --config
_VALUE_OPTIONS = ("k", "eps", "alpha", "gamma", "k_range", "eps_range", "alpha_range",
                  "gamma_range", "tau_range", "figure", "format", "out", "tol", "jobs")
_FLAG_OPTIONS = ("longwave", "plot_script", "diagnostics")


def _complex_json(z: complex):
    return [z.real, z.imag]


def _finite(x: float):
    return x if math.isfinite(x) else None


def result_record(r: ReflectionResult) -> dict:
    p = r.params
    return {
        "k": p.k,
        "epsilon": p.epsilon,
        "alpha_p": r.alpha_p,
        "gamma": _complex_json(p.gamma),
        "eta0": _complex_json(r.eta0),
        "eta0_residual": r.eta0_residual,
        "K": _complex_json(r.K),
        "R": r.R,
        "phi": r.phi,
        "A": _complex_json(r.A_val),
        "B": _complex_json(r.B_val),
        "C": _complex_json(r.C_val),
        "D": _complex_json(r.D_val),
        "Qm": _complex_json(r.Qm),
        "qerr": r.quadrature_err,
        "K_alt": _complex_json(r.K_alt),
        "dual_rel_diff": _finite(r.dual_rel_diff),
        "m_plus": _complex_json(r.m_plus),
        "m_minus": _complex_json(r.m_minus),
    }


def diagnostics_record(r: ReflectionResult, spec: QuadratureSpec) -> dict:
    d = flow_diagnostics(r, spec=spec)
    return {
        "P_i": _complex_json(d.P_i),
        "P_r": _complex_json(d.P_r),
        "P_s": _complex_json(d.P_s),
        "A_s": _complex_json(d.A_s),
        "A1": _complex_json(d.A1),
        "e0": _complex_json(d.e0),
        "non_flow": _complex_json(d.non_flow),
        "momentum_balance_rel": d.balance_rel,
        "alpha_recovered": _complex_json(d.alpha_recovered),
        "bc_residual": d.bc_residual,
    }


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--config", default=None, help="key=value file mirroring the flags")
    p.add_argument("--plot-script", action="store_true", default=None,
                   help="write a gnuplot script next to the data file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plasmarefl",
        description="Reflection of a plasma wave from the boundary of a degenerate plasma.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reflect", help="reflectance and phase at one point or over ranges")
    p.add_argument("--k", default=None, help="wave number (value or A:B:N)")
    p.add_argument("--eps", default=None, help="collision parameter (value or A:B:N[:log])")
    p.add_argument("--alpha", default=None, help="accommodation coefficient (value or A:B:N)")
    p.add_argument("--longwave", action="store_true", default=None,
                   help="use the long-wave root instead of the exact dispersion solve")
    p.add_argument("--diagnostics", action="store_true", default=None,
                   help="add boundary-flow diagnostics (single point only)")
    _add_common(p)

    p = sub.add_parser("sweep", help="grid sweep or figure reproduction")
    p.add_argument("--figure", type=int, choices=(3, 4, 5, 6), default=None)
    p.add_argument("--k", default=None)
    p.add_argument("--eps", default=None)
    p.add_argument("--alpha", default=None)
    p.add_argument("--k-range", dest="k_range", default=None, help="A:B:N[:log]")
    p.add_argument("--eps-range", dest="eps_range", default=None, help="A:B:N[:log]")
    p.add_argument("--alpha-range", dest="alpha_range", default=None, help="A:B:N")
    p.add_argument("--longwave", action="store_true", default=None)
    _add_common(p)

    p = sub.add_parser("zeros", help="zero count and plasma-mode zero over (gamma, eps)")
    p.add_argument("--gamma", default=None)
    p.add_argument("--eps", default=None)
    p.add_argument("--gamma-range", dest="gamma_range", default=None)
    p.add_argument("--eps-range", dest="eps_range", default=None)
    _add_common(p)

    p = sub.add_parser("domain-curve", help="the curve L separating D+ and D-")
    p.add_argument("--tau-range", dest="tau_range", default=None, help="A:B:N within (0, 1)")
    _add_common(p)

    p = sub.add_parser("dispersion-grid", help="complex detuning from the dispersion relation")
    p.add_argument("--k", default=None)
    p.add_argument("--eps", default=None)
    p.add_argument("--k-range", dest="k_range", default=None)
    p.add_argument("--eps-range", dest="eps_range", default=None)
    _add_common(p)
    return parser


def read_config(path: str) -> Dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    with open(path) as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{n}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in _VALUE_OPTIONS + _FLAG_OPTIONS:
                raise ParameterError(f"{path}:{n}: unknown key {key!r}")
            out[key] = value
    return out


def apply_config(args: argparse.Namespace, cfg: Dict[str, str]) -> argparse.Namespace:
    """Fill options not given on the command line from ``cfg``."""
    for key, value in cfg.items():
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        if key in _FLAG_OPTIONS:
            setattr(args, key, value.lower() in ("1", "true", "yes", "on"))
        elif key == "tol":
            setattr(args, key, float(value))
        elif key in ("jobs", "figure"):
            setattr(args, key, int(value))
        else:
            setattr(args, key, value)
    return args


def _range(args, name: str) -> Optional[GridRange]:
    """Range from ``--name-range`` or the scalar ``--name``; both forms accept A:B:N."""
    rng = getattr(args, f"{name}_range", None)
    val = getattr(args, name, None)
    if rng is not None and val is not None:
        raise ParameterError(f"give either --{name} or --{name}-range, not both")
    text = rng if rng is not None else val
    return GridRange.parse(text) if text is not None else None


def _quad_spec(args) -> QuadratureSpec:
    if args.tol is None:
        return DEFAULT_SPEC
    return replace(DEFAULT_SPEC, rel_tol=float(args.tol))


def _write(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_rows(spec: SweepSpec, rows: List[dict]):
    if spec.output_format == "json":
        text = json.dumps(to_json_rows(rows), indent=1) + "\n"
    else:
        text = to_csv(rows, columns_for(spec, rows))
    _write(text, spec.output_path)
    if spec.plot_script:
        if spec.output_path is None or spec.output_format != "csv":
            raise ParameterError("--plot-script needs --out and csv format")
        script = spec.output_path.rsplit(".", 1)[0] + ".gp"
        _write(gnuplot_script(spec, spec.output_path), script)
        log.info("wrote %s", script)


def _single_point(args, spec: QuadratureSpec) -> int:
    k, eps, alpha = float(args.k), float(args.eps), float(args.alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha_p must lie in [0, 1], got {alpha}")
    try:
        if args.longwave:
            r = longwave_reflectance(k, eps, alpha, spec)
        else:
            r = reflect(k, eps, alpha, spec)
        record = result_record(r)
        record["n_zeros"] = count_zeros(r.params).n_zeros
        if args.diagnostics:
            record["diagnostics"] = diagnostics_record(r, spec)
    except ParameterError:
        raise
    except PlasmaReflError as exc:
        err = {"error": {"type": type(exc).__name__, "status": _status_of(exc), "message": str(exc)}}
        _write(json.dumps(err) + "\n", args.out)
        return EXIT_SOLVER
    _write(json.dumps(record, indent=1) + "\n", args.out)
    return EXIT_OK


def _is_scalar(text: Optional[str]) -> bool:
    return text is not None and ":" not in text


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.config:
            apply_config(args, read_config(args.config))
        quad = _quad_spec(args)
        cmd = args.command
        if cmd == "reflect" and all(_is_scalar(getattr(args, n)) for n in ("k", "eps", "alpha")):
            return _single_point(args, quad)
        if cmd == "reflect" and args.diagnostics:
            raise ParameterError("--diagnostics needs scalar --k, --eps and --alpha")
        mode = cmd
        if cmd == "sweep":
            mode = f"figure{args.figure}" if args.figure is not None else "reflect"
        spec = SweepSpec(
            mode=mode,
            k_range=_range(args, "k") if hasattr(args, "k") else None,
            eps_range=_range(args, "eps") if hasattr(args, "eps") else None,
            alpha_range=_range(args, "alpha") if hasattr(args, "alpha") else None,
            gamma_range=_range(args, "gamma") if hasattr(args, "gamma") else None,
            tau_range=_range(args, "tau") if hasattr(args, "tau_range") else None,
            use_longwave=bool(getattr(args, "longwave", False)),
            output_format=args.format or "csv",
            output_path=args.out,
            quad=quad,
            plot_script=bool(args.plot_script),
            jobs=args.jobs,
        )
        rows = run_sweep(spec)
        _emit_rows(spec, rows)
        return EXIT_OK
    except (ParameterError, ValueError, OSError) as exc:
        err = {"error": {"type": type(exc).__name__, "status": "invalid", "message": str(exc)}}
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_INVALID


def main(argv: Optional[Sequence[str]] = None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
