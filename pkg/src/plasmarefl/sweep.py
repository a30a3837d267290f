"""Parameter sweeps over (k, eps, alpha_p) and the figure grids.

Work is grouped by ``(k, eps)``: the dispersion solve, the zero count and
``Qm`` are shared by every ``alpha_p`` at that pair.  Groups run in a
process pool; rows are assembled in grid order, so the output does not
depend on the number of workers.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import spectrum
from .asymptotics import longwave_params
from .errors import (
    ConvergenceError,
    DegenerateDenominatorError,
    ModeAbsentError,
    ParameterError,
    PlasmaReflError,
    QuadratureError,
    WindingError,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .reflection import amplitude_ratio, qm_integral

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "k", "epsilon", "alpha_p", "R", "phi", "K_re", "K_im",
    "eta0_re", "eta0_im", "n_zeros", "qerr", "status",
)
MODES = (
    "reflect", "zeros", "dispersion-grid", "domain-curve",
    "figure3", "figure4", "figure5", "figure6",
)


@dataclass(frozen=True)
class GridRange:
    """``count`` points from ``start`` to ``stop``, linear or geometric."""

    start: float
    stop: float
    count: int = 1
    log: bool = False

    def __post_init__(self):
        if self.count < 1:
            raise ParameterError("range count must be at least 1")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ParameterError("range bounds must be finite")
        if self.start > self.stop:
            raise ParameterError(f"range start {self.start} exceeds stop {self.stop}")
        if self.count == 1 and self.start != self.stop:
            raise ParameterError("a single-point range needs start == stop")
        if self.log and self.start <= 0:
            raise ParameterError("geometric ranges need positive bounds")

    @classmethod
    def fixed(cls, value: float) -> "GridRange":
        return cls(float(value), float(value), 1)

    @classmethod
    def parse(cls, text: str) -> "GridRange":
        """Parse ``value``, ``a:b:n`` or ``a:b:n:log``."""
        parts = text.strip().split(":")
        try:
            if len(parts) == 1:
                return cls.fixed(float(parts[0]))
            if len(parts) in (3, 4):
                log_flag = len(parts) == 4
                if log_flag and parts[3] != "log":
                    raise ValueError
                return cls(float(parts[0]), float(parts[1]), int(parts[2]), log_flag)
        except ValueError:
            pass
        raise ParameterError(f"cannot parse range {text!r}; expected VALUE, A:B:N or A:B:N:log")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """A sweep request.

    For the figure modes the grids are fixed; the ranges are ignored.
    ``gamma_range`` is used by the ``zeros`` mode and ``tau_range`` by
    ``domain-curve``.
    """

    mode: str = "reflect"
    k_range: Optional[GridRange] = None
    eps_range: Optional[GridRange] = None
    alpha_range: Optional[GridRange] = None
    gamma_range: Optional[GridRange] = None
    tau_range: Optional[GridRange] = None
    use_longwave: bool = False
    output_format: str = "csv"
    output_path: Optional[str] = None
    quad: QuadratureSpec = field(default=DEFAULT_SPEC)
    plot_script: bool = False
    jobs: Optional[int] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.output_format not in ("csv", "json"):
            raise ParameterError(f"unknown format {self.output_format!r}")
        if self.jobs is not None and self.jobs < 1:
            raise ParameterError("jobs must be at least 1")


_FIG_EPS = tuple(np.geomspace(1e-3, 1e-1, 21))

# (k values, eps values, alpha values) of each figure grid
FIGURE_GRIDS: Dict[str, Tuple[Tuple[float, ...], Tuple[float, ...], Tuple[float, ...]]] = {
    "figure3": (tuple(np.linspace(0.01, 0.3, 30)), (1e-2,), (0.1, 0.5, 1.0)),
    "figure4": ((0.001, 0.01, 0.05, 0.1, 0.2), _FIG_EPS, (1.0,)),
    "figure5": ((0.05, 0.1, 0.15, 0.25), (1e-3,), tuple(np.linspace(0.0, 1.0, 21))),
    "figure6": ((0.2,), _FIG_EPS, (0.1, 0.5, 1.0)),
}


def figure_axes(mode: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(k values, eps values, alpha values)`` of a figure grid."""
    ks, es, alphas = FIGURE_GRIDS[mode]
    return np.array(ks), np.array(es), np.array(alphas)


def _status_of(exc: BaseException) -> str:
    if isinstance(exc, ModeAbsentError):
        return "mode_absent"
    if isinstance(exc, WindingError):
        return "near_L"
    if isinstance(exc, DegenerateDenominatorError):
        return "degenerate"
    if isinstance(exc, QuadratureError):
        return "quadrature"
    if isinstance(exc, ConvergenceError):
        return "no_convergence"
    if isinstance(exc, ParameterError):
        return "invalid"
    return "error"


def _failed_row(k, eps, alpha, status, n_zeros=-1):
    nan = math.nan
    return {
        "k": k, "epsilon": eps, "alpha_p": alpha, "R": nan, "phi": nan,
        "K_re": nan, "K_im": nan, "eta0_re": nan, "eta0_im": nan,
        "n_zeros": n_zeros, "qerr": nan, "status": status, "dual_rel_diff": nan,
    }


def reflect_group(k: float, eps: float, alphas: Sequence[float], longwave: bool,
                  quad: QuadratureSpec = DEFAULT_SPEC) -> List[dict]:
    """Rows for every ``alpha_p`` at one ``(k, eps)``; failures become status rows."""
    k, eps = float(k), float(eps)
    try:
        if longwave:
            lw = longwave_params(k, eps)
            params, eta0 = lw.to_params(), lw.eta0_lw
            n_zeros = spectrum.count_zeros(params).n_zeros
        else:
            params = spectrum.solve_dispersion(k, eps)
            eta0, n_zeros = None, 2
        qm = qm_integral(params, quad)
    except PlasmaReflError as exc:
        log.info("k=%g eps=%g: %s", k, eps, exc)
        n = 0 if isinstance(exc, ModeAbsentError) else -1
        return [_failed_row(k, eps, float(a), _status_of(exc), n) for a in alphas]
    rows = []
    for a in alphas:
        a = float(a)
        try:
            r = amplitude_ratio(params, a, quad, eta0=eta0, qm=qm)
        except PlasmaReflError as exc:
            log.info("k=%g eps=%g alpha=%g: %s", k, eps, a, exc)
            rows.append(_failed_row(k, eps, a, _status_of(exc), n_zeros))
            continue
        rows.append({
            "k": k, "epsilon": eps, "alpha_p": a, "R": r.R, "phi": r.phi,
            "K_re": r.K.real, "K_im": r.K.imag,
            "eta0_re": r.eta0.real, "eta0_im": r.eta0.imag,
            "n_zeros": n_zeros, "qerr": r.quadrature_err, "status": "ok",
            "dual_rel_diff": r.dual_rel_diff,
        })
    return rows


def _reflect_task(args):
    return reflect_group(*args)


def _zeros_task(args):
    gamma, eps = args
    row = {"gamma": gamma, "epsilon": eps, "n_zeros": -1, "winding_raw": math.nan,
           "eta0_re": math.nan, "eta0_im": math.nan, "residual": math.nan,
           "domain": "", "status": "ok"}
    try:
        row["domain"] = spectrum.classify_domain(gamma, eps).value
        params = spectrum.make_params(eps, gamma)
        res = spectrum.count_zeros(params)
        row["n_zeros"], row["winding_raw"] = res.n_zeros, res.winding_raw
        if res.n_zeros == 2:
            z = spectrum.find_eta0(params)
            row["eta0_re"], row["eta0_im"], row["residual"] = z.eta0.real, z.eta0.imag, z.residual
    except PlasmaReflError as exc:
        row["status"] = _status_of(exc)
    return [row]


def _dispersion_task(args):
    k, eps = args
    row = {"k": k, "epsilon": eps, "gamma_re": math.nan, "gamma_im": math.nan,
           "eta0_re": math.nan, "eta0_im": math.nan, "residual": math.nan,
           "n_zeros": -1, "status": "ok"}
    try:
        p = spectrum.solve_dispersion(k, eps)
        z = spectrum.eta0_from_k(p, k)
        row.update(gamma_re=p.gamma.real, gamma_im=p.gamma.imag, eta0_re=z.real,
                   eta0_im=z.imag, residual=abs(spectrum.disp.lam(z, p)), n_zeros=2)
    except PlasmaReflError as exc:
        row["status"] = _status_of(exc)
        if isinstance(exc, ModeAbsentError):
            row["n_zeros"] = 0
    return [row]


def _run_tasks(fn, tasks: List[tuple], jobs: Optional[int]) -> List[dict]:
    jobs = jobs or os.cpu_count() or 1
    if jobs == 1 or len(tasks) <= 1:
        chunks = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            chunks = list(pool.map(fn, tasks))
    return [row for chunk in chunks for row in chunk]


def _require(rng: Optional[GridRange], name: str) -> GridRange:
    if rng is None:
        raise ParameterError(f"mode needs a value or range for {name}")
    return rng


def _check_alpha_values(alphas: Iterable[float]):
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise ParameterError(f"alpha_p must lie in [0, 1], got {a}")


def run_sweep(spec: SweepSpec) -> List[dict]:
    """Evaluate the sweep and return rows in grid order.

    Row keys for the reflect and figure modes are :data:`CSV_COLUMNS` plus
    ``dual_rel_diff``.
    """
    mode = spec.mode
    if mode in FIGURE_GRIDS or mode == "reflect":
        if mode == "reflect":
            ks = _require(spec.k_range, "k").values()
            es = _require(spec.eps_range, "eps").values()
            alphas = _require(spec.alpha_range, "alpha").values()
        else:
            ks, es, alphas = figure_axes(mode)
        _check_alpha_values(alphas)
        alphas = tuple(float(a) for a in alphas)
        tasks = [(float(k), float(e), alphas, spec.use_longwave, spec.quad) for k in ks for e in es]
        return _run_tasks(_reflect_task, tasks, spec.jobs)
    if mode == "zeros":
        gs = _require(spec.gamma_range, "gamma").values()
        es = _require(spec.eps_range, "eps").values()
        return _run_tasks(_zeros_task, [(float(g), float(e)) for g in gs for e in es], spec.jobs)
    if mode == "dispersion-grid":
        ks = _require(spec.k_range, "k").values()
        es = _require(spec.eps_range, "eps").values()
        return _run_tasks(_dispersion_task, [(float(k), float(e)) for k in ks for e in es], spec.jobs)
    # domain-curve
    taus = (spec.tau_range or GridRange(0.834, 0.999999, 400)).values()
    return [{"tau": pt.tau, "gamma_L": pt.gamma_L, "epsilon_L": pt.epsilon_L}
            for pt in spectrum.domain_curve(taus)]


# --- output -----------------------------------------------------------------

def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def columns_for(spec: SweepSpec, rows: List[dict]) -> Tuple[str, ...]:
    if spec.mode in FIGURE_GRIDS or spec.mode == "reflect":
        return CSV_COLUMNS
    return tuple(rows[0].keys()) if rows else ()


def to_csv(rows: List[dict], columns: Sequence[str]) -> str:
    lines = [",".join(columns)]
    lines += [",".join(format_value(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def _json_safe(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def to_json_rows(rows: List[dict]) -> List[dict]:
    return [{k: _json_safe(v) for k, v in r.items()} for r in rows]


_PLOT_AXES = {
    "figure3": ("k", 1, "R", 4, "alpha_p", 3, (0.1, 0.5, 1.0)),
    "figure4": ("epsilon", 2, "R", 4, "k", 1, (0.001, 0.01, 0.05, 0.1, 0.2)),
    "figure5": ("alpha_p", 3, "R", 4, "k", 1, (0.05, 0.1, 0.15, 0.25)),
    "figure6": ("epsilon", 2, "phi", 5, "alpha_p", 3, (0.1, 0.5, 1.0)),
}


def gnuplot_script(spec: SweepSpec, data_path: str) -> str:
    """A gnuplot script drawing one curve per value of the grouping column."""
    lines = ["set datafile separator ','", "set key autotitle columnhead", "set grid"]
    if spec.mode in _PLOT_AXES:
        xname, xcol, yname, ycol, gname, gcol, groups = _PLOT_AXES[spec.mode]
        if xname == "epsilon":
            lines.append("set logscale x")
        lines += [f"set xlabel '{xname}'", f"set ylabel '{yname}'"]
        parts = [
            f"'{data_path}' using {xcol}:(abs(${gcol}-{g})<1e-12 ? ${ycol} : 1/0) "
            f"with linespoints title '{gname}={g}'"
            for g in groups
        ]
        lines.append("plot " + ", \\\n     ".join(parts))
    elif spec.mode == "domain-curve":
        lines += ["set xlabel 'gamma'", "set ylabel 'epsilon'", "set logscale y",
                  f"plot '{data_path}' using 2:3 with lines title 'L'"]
    elif spec.mode == "zeros":
        lines += ["set xlabel 'gamma'", "set ylabel 'epsilon'",
                  f"plot '{data_path}' using 1:2:3 with points palette title 'n_zeros'"]
    else:
        lines += ["set xlabel 'k'", "set ylabel 'R'",
                  f"plot '{data_path}' using 1:4 with linespoints title 'R'"]
    return "\n".join(lines) + "\n"
