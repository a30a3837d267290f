"""Discrete spectrum: zero counting, the plasma-mode zero and the dispersion relation.

The number of zeros of ``lam`` off the cut is twice the winding number of
``G(tau) = lam+(tau) / lam-(tau)`` over ``0 < tau < 1``.  The winding is
tracked by accumulating principal arguments of consecutive ratios on a grid
that is bisected wherever a step exceeds ``pi/2``.

``G`` tends to 1 at ``tau -> 1`` only logarithmically (through
``lambda_c(tau) -> -oo``), so the last stretch is handled analytically: with
``tau`` frozen at 1, ``G`` is a Moebius function of ``u = 1/lambda_c`` that
equals 1 at ``u = 0``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import dispersion as disp
from .errors import ConvergenceError, ModeAbsentError, ParameterError, WindingError
from .params import PlasmaParams, eta0_from_k, make_params

TAU_CLEARANCE = 1e-6
RESIDUAL_TOL = 1e-12
NEAR_L_TOL = 1e-3


@dataclass(frozen=True)
class SpectrumResult:
    """Outcome of zero counting and/or locating the plasma-mode zero.

    ``winding_raw`` is the unrounded winding number and ``min_abs_lambda_pm``
    the smallest ``|lam+-|`` met on the cut; both are diagnostics for
    parameters close to the curve L.

    ``residual`` is ``|lam|`` at ``eta0 = coth(t0)`` evaluated through ``t0``.
    When ``eta0`` lies within about 1e-7 of the branch point ``z = 1``,
    ``lam`` evaluated at the rounded ``eta0`` carries an extra error of
    order ``|lam'(eta0)| * ulp(eta0)`` that no double can avoid.
    """

    n_zeros: int
    winding_index: int
    eta0: Optional[complex] = None
    residual: float = math.nan
    newton_iters: int = 0
    winding_raw: float = math.nan
    min_abs_lambda_pm: float = math.nan
    t0: Optional[complex] = None


@dataclass(frozen=True)
class DomainCurvePoint:
    tau: float
    gamma_L: float
    epsilon_L: float


class Domain(enum.Enum):
    DPlus = "D+"
    DMinus = "D-"
    NearL = "L"


# --- argument principle -----------------------------------------------------

def g_function(tau, params: PlasmaParams):
    """``G(tau) = lam+(tau) / lam-(tau)`` for ``0 < tau < 1``."""
    plus, minus = disp.lam_plus_minus(tau, params)
    return plus / minus


def _g_tail(u, params: PlasmaParams):
    # lam+- ~ a + b (lambda_c +- i*pi/2) with tau = 1; divided through by lambda_c
    a = 1.0 - params.inv_z0
    b = params.inv_z0 - params.inv_z0_eta1_sq
    s = 0.5 * np.pi
    u = np.asarray(u, dtype=float)
    num = a * u + b * (1.0 + 1j * s * u)
    den = a * u + b * (1.0 - 1j * s * u)
    return np.where(u == 0.0, 1.0 + 0j, num / np.where(den == 0, 1.0, den))


def _accumulate_argument(fn, grid: np.ndarray, max_points: int = 200_000):
    """Total argument change of ``fn`` along ``grid`` with step bisection.

    Returns (increment, values at the final grid).
    """
    t = np.asarray(grid, dtype=float)
    vals = np.asarray(fn(t))
    while True:
        steps = np.angle(vals[1:] / vals[:-1])
        bad = np.flatnonzero(np.abs(steps) > 0.5 * np.pi)
        if bad.size == 0:
            return float(steps.sum()), vals
        widths = np.abs(t[bad + 1] - t[bad])
        if t.size + bad.size > max_points or np.any(widths < 1e-13 * np.maximum(1.0, np.abs(t[bad]))):
            raise WindingError(
                "argument of G(tau) cannot be resolved below pi/2 per step; "
                "parameters are probably on or near the curve L"
            )
        mids = 0.5 * (t[bad] + t[bad + 1])
        t = np.insert(t, bad + 1, mids)
        vals = np.insert(vals, bad + 1, np.asarray(fn(mids)))


def _tau_grid(n: int = 400) -> np.ndarray:
    x = np.linspace(0.0, 1.0, n)
    tau = 0.5 * (1.0 - np.cos(np.pi * x))
    tau = TAU_CLEARANCE + (1.0 - 2.0 * TAU_CLEARANCE) * tau
    # logarithmic refinement toward tau = 1 where lambda_c diverges
    tail = 1.0 - np.geomspace(1e-2, TAU_CLEARANCE, 60)
    return np.unique(np.concatenate([tau, tail]))


def winding(params: PlasmaParams):
    """Unrounded winding number of ``G`` and the smallest ``|lam+-|`` on the cut."""
    tau = _tau_grid()
    total, _ = _accumulate_argument(lambda t: g_function(t, params), tau)
    g_start = g_function(tau[0], params)
    total += float(np.angle(g_start))  # from G(0) = 1
    t_end = tau[-1]
    u_end = 1.0 / disp.lambda_c_cut(t_end)
    g_end = g_function(t_end, params)
    total += float(np.angle(_g_tail(u_end, params) / g_end))
    u = u_end * np.linspace(1.0, 0.0, 200)
    tail_total, _ = _accumulate_argument(lambda uu: _g_tail(uu, params), u)
    total += tail_total
    plus, minus = disp.lam_plus_minus(tau, params)
    min_abs = float(min(np.abs(plus).min(), np.abs(minus).min()))
    return total / (2.0 * np.pi), min_abs


def winding_index(params: PlasmaParams) -> int:
    """Index of ``G`` on [0, 1]; the number of zeros off the cut is twice this."""
    raw, _ = winding(params)
    kappa = round(raw)
    if abs(raw - kappa) > 0.05:
        raise WindingError(f"winding number {raw:.6f} is not close to an integer")
    return int(kappa)


def count_zeros(params: PlasmaParams) -> SpectrumResult:
    raw, min_abs = winding(params)
    kappa = round(raw)
    if abs(raw - kappa) > 0.05:
        raise WindingError(f"winding number {raw:.6f} is not close to an integer")
    return SpectrumResult(
        n_zeros=2 * int(kappa), winding_index=int(kappa),
        winding_raw=raw, min_abs_lambda_pm=min_abs,
    )


# --- locating the zero ------------------------------------------------------

def longwave_eta0_guess(k: float, epsilon: float) -> complex:
    return (1.0 + 0.3 * k * k + 0.5j * epsilon) / k


def _on_cut(z: complex) -> bool:
    return abs(z.imag) < 1e-14 and abs(z.real) <= 1.0


# Newton runs in t with z = coth(t).  The right half-strip Re t > 0,
# |Im t| < pi/2 maps onto Re z > 0 minus (0, 1]; the branch point z = 1 is
# pushed to Re t -> oo and Log((z - 1)/(z + 1)) = -2t exactly, so zeros
# hugging the branch point stay well conditioned.
_HALF_PI = 0.5 * np.pi


def _z_of_t(t: complex) -> complex:
    q = np.exp(-2.0 * t)
    return (1.0 + q) / (1.0 - q)


def _t_of_z(z: complex) -> complex:
    return -0.5 * complex(np.log((z - 1.0) / (z + 1.0)))


def _lam_and_dt(t: complex, p: PlasmaParams):
    """``lam(coth t)`` and its t-derivative ``lam'(z) (1 - z**2)``."""
    z = _z_of_t(t)
    if abs(z) >= disp.SERIES_RADIUS:
        return disp.lam(z, p), disp.lam_prime(z, p) * (1.0 - z * z), z
    a = p.inv_z0 - z * z * p.inv_z0_eta1_sq
    lc = 1.0 - z * t
    f = 1.0 - p.inv_z0 + a * lc
    # (1 - z**2) lambda_c'(z) = (1 - z**2)(-t) - z
    df = (1.0 - z * z) * (-2.0 * z * p.inv_z0_eta1_sq * lc - a * t) - a * z
    return f, df, z


def _in_strip(t: complex) -> bool:
    return t.real > 0.0 and abs(t.imag) < _HALF_PI and np.isfinite(t)


def _newton(params: PlasmaParams, z: complex, max_iter: int):
    """Newton on ``lam`` in the t variable from the start ``z`` (``Re z > 0``).

    Returns ``(t, |lam(coth t)|, iterations)`` for the best iterate, or
    ``(None, nan, iterations)`` when the iteration leaves the domain.
    """
    if _on_cut(z) or not np.isfinite(z) or z.real <= 0:
        return None, math.nan, 0
    t = _t_of_z(z)
    if not _in_strip(t):
        return None, math.nan, 0
    best_t, best_res = None, math.inf
    with np.errstate(all="ignore"):
        for it in range(1, max_iter + 1):
            f, df, _ = _lam_and_dt(t, params)
            res = abs(f)
            if not np.isfinite(res):
                break
            if res < best_res:
                best_t, best_res = t, res
            if f == 0:
                break
            if df == 0 or not np.isfinite(df):
                break
            step = f / df
            t_new = t - step
            while not _in_strip(t_new):
                step *= 0.5
                t_new = t - step
                if abs(step) < 1e-300:
                    break
            if not _in_strip(t_new):
                break
            t = t_new
            if abs(step) <= 1e-14 * max(1.0, abs(t)):
                f, _, _ = _lam_and_dt(t, params)
                if abs(f) < best_res:
                    best_t, best_res = t, abs(f)
                break
    if best_t is None:
        return None, math.nan, it
    return best_t, best_res, it


def _polish(params: PlasmaParams, z: complex) -> complex:
    """A few z-Newton steps to land on the double nearest the zero."""
    best, best_res = z, abs(disp.lam(z, params))
    for _ in range(3):
        d = disp.lam_prime(best, params)
        if d == 0 or not np.isfinite(d):
            break
        cand = best - disp.lam(best, params) / d
        if _on_cut(cand) or cand.real <= 0:
            break
        res = abs(disp.lam(cand, params))
        if not res < best_res:
            break
        best, best_res = cand, res
    return best


def _scan_candidates(params: PlasmaParams, r_max: float, n_candidates: int = 8):
    """Local minima of ``|lam|`` on a grid over the t half-strip."""
    re_t = np.geomspace(0.5 / r_max, 40.0, 120)
    im_pos = _HALF_PI * (1.0 - np.geomspace(1e-3, 1.0, 24))[::-1]
    im_t = np.concatenate([-im_pos[::-1], im_pos[1:]])
    tt = re_t[:, None] + 1j * im_t[None, :]
    with np.errstate(all="ignore"):
        zz = _z_of_t(tt)
        ok = np.isfinite(zz) & (np.abs(zz.imag) > 1e-14)
        mag = np.full(zz.shape, np.inf)
        mag[ok] = np.abs(disp.lam(zz[ok], params))
    padded = np.pad(mag, 1, constant_values=np.inf)
    core = padded[1:-1, 1:-1]
    is_min = np.isfinite(core)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= core <= padded[1 + di:padded.shape[0] - 1 + di, 1 + dj:padded.shape[1] - 1 + dj]
    idx = np.flatnonzero(is_min.ravel())
    idx = idx[np.argsort(mag.ravel()[idx])][:n_candidates]
    return list(zz.ravel()[idx])


def find_eta0(
    params: PlasmaParams,
    initial_guess: Optional[complex] = None,
    max_iter: int = 50,
) -> SpectrumResult:
    """Locate the zero ``eta0`` of ``lam`` with ``Re eta0 > 0`` by Newton's method.

    The starting point is ``initial_guess``, else the long-wave estimate when
    ``params.k`` is known.  If that fails, or neither is available, the best
    local minima of ``|lam|`` on a grid over ``Re z > 0`` out to
    ``max(10, 10/eps)`` are tried.  Newton runs in ``t = arccoth(z)`` so
    zeros close to the branch point ``z = 1`` are found reliably.

    Raises
    ------
    ModeAbsentError
        When no start point converges to a zero with residual below 1e-12.
    """
    starts = []
    if initial_guess is not None:
        g = complex(initial_guess)
        starts.append(-g if g.real < 0 else g)
    elif params.k is not None:
        starts.append(longwave_eta0_guess(params.k, params.epsilon))
    last = None
    tried = 0

    def attempts():
        yield from starts
        yield from _scan_candidates(params, max(10.0, 10.0 / params.epsilon))

    for start in attempts():
        tried += 1
        t, residual, iters = _newton(params, start, max_iter)
        if t is None:
            continue
        z = _polish(params, _z_of_t(t))
        if not z.real > 0:
            continue
        last = (z, residual)
        if residual < RESIDUAL_TOL:
            return SpectrumResult(
                n_zeros=2, winding_index=1, eta0=z, residual=residual, newton_iters=iters,
                t0=t,
            )
    detail = f"; best residual {last[1]:.3g}" if last else ""
    raise ModeAbsentError(f"no plasma-mode zero found from {tried} start point(s){detail}")


# --- dispersion relation ----------------------------------------------------

def _dlam_dgamma(z: complex, p: PlasmaParams) -> complex:
    """Partial derivative of ``lam(z)`` in gamma at fixed ``z``."""
    lc = disp.lambda_c(z)
    # lam = 1 + inv_z0 (lc - 1) - inv_z0_eta1_sq z**2 lc, inv_z0 = i eps/w, inv_z0_eta1_sq = -3/w**2
    w = p.w
    return (lc - 1.0) * (-1j * p.epsilon / w**2) - z * z * lc * (6.0 / w**3)


def _dispersion_residual(k, epsilon, gamma):
    p = make_params(epsilon, gamma, k)
    z = eta0_from_k(p, k)
    return p, z, disp.lam(z, p)


def solve_dispersion(
    k: float,
    epsilon: float,
    gamma_guess: Optional[complex] = None,
    max_iter: int = 60,
    check_mode: bool = True,
) -> PlasmaParams:
    """Complex detuning ``gamma`` with ``lam((1 + gamma + i eps)/k) = 0``.

    Damped Newton from the long-wave seed ``0.3 k**2 - 0.5 i eps``.

    Raises
    ------
    ConvergenceError
        If the iteration stalls or the final residual exceeds 1e-12.
    ModeAbsentError
        If ``check_mode`` and the winding index at the solution is not 1.
    """
    k = float(k)
    epsilon = float(epsilon)
    if not (math.isfinite(k) and k > 0):
        raise ParameterError(f"k must be positive, got {k!r}")
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise ParameterError(f"epsilon must be positive, got {epsilon!r}")
    g = complex(gamma_guess) if gamma_guess is not None else 0.3 * k * k - 0.5j * epsilon
    p, z, f = _dispersion_residual(k, epsilon, g)
    converged = False
    for _ in range(max_iter):
        if f == 0:
            converged = True
            break
        deriv = disp.lam_prime(z, p) / k + _dlam_dgamma(z, p)
        step = f / deriv
        for _ in range(30):
            g_new = g - step
            if abs(1.0 + g_new + 1j * epsilon) > 0:
                try:
                    p_new, z_new, f_new = _dispersion_residual(k, epsilon, g_new)
                except ParameterError:
                    f_new = None
                if f_new is not None and np.isfinite(f_new) and abs(f_new) <= abs(f) * (1 + 1e-9) + 1e-300:
                    break
            step *= 0.5
        else:
            raise ConvergenceError(f"dispersion solve stalled at gamma={g}")
        g, p, z, f = g_new, p_new, z_new, f_new
        if abs(step) <= 4e-16 * abs(1.0 + g + 1j * epsilon):
            converged = True
            break
    if not converged or abs(f) >= RESIDUAL_TOL:
        raise ConvergenceError(
            f"dispersion solve for k={k}, eps={epsilon} did not converge (|lam|={abs(f):.3g})"
        )
    if z.real <= 0:
        raise ModeAbsentError(f"solution gamma={g} gives Re eta0 <= 0")
    if check_mode:
        n = count_zeros(p).n_zeros
        if n != 2:
            raise ModeAbsentError(f"winding index {n // 2} at the dispersion solution")
    return p


# --- curve L ----------------------------------------------------------------

def _lambda0(tau):
    return 1.0 + 0.5 * tau * np.log((1.0 - tau) / (1.0 + tau))


@functools.lru_cache(maxsize=None)
def lambda0_root() -> float:
    """``tau*`` in (0, 1) where ``1 + (tau/2) ln((1-tau)/(1+tau))`` vanishes."""
    return brentq(_lambda0, 0.5, 1.0 - 1e-12, xtol=1e-15, rtol=1e-15)


def _curve_from_l0(tau, l0):
    s = 0.5 * np.pi * tau
    den = l0 * (s * s + (1.0 + l0) ** 2)
    l1 = -3.0 * tau * tau * (s * s + l0 * (1.0 + l0)) ** 2 / den
    l2 = -3.0 * tau * tau * s * s / den
    return l1, l2


def curve_radicands(tau):
    """``(L1(tau), L2(tau))``; the curve exists where both are non-negative."""
    tau = np.asarray(tau, dtype=float)
    return _curve_from_l0(tau, _lambda0(tau))


def domain_curve(tau_grid: Sequence[float]) -> List[DomainCurvePoint]:
    """Points ``(gamma, eps) = (-1 + sqrt(L1), sqrt(L2))`` of the curve L.

    Values of ``tau`` where a radicand is negative (``tau < tau*``) are
    skipped.
    """
    out = []
    for tau in tau_grid:
        tau = float(tau)
        if not 0.0 < tau < 1.0:
            raise ParameterError(f"tau must lie in (0, 1), got {tau}")
        l1, l2 = curve_radicands(tau)
        if l1 >= 0.0 and l2 >= 0.0 and np.isfinite(l1) and np.isfinite(l2):
            out.append(DomainCurvePoint(tau, -1.0 + math.sqrt(l1), math.sqrt(l2)))
    return out


def _tau_from_v(v: float) -> float:
    """Invert ``lambda0(tau) = -v`` on (tau*, 1)."""
    gap = 2.0 * math.exp(-2.0 * (v + 1.0))  # 1 - tau for lambda0 -> -oo
    if gap < 1e-8:
        return 1.0 - gap
    return brentq(lambda t: _lambda0(t) + v, lambda0_root(), 1.0 - 1e-14, xtol=1e-16, rtol=1e-15)


def _curve_at_v(v: float):
    tau = _tau_from_v(v)
    l1, l2 = _curve_from_l0(tau, -v)
    return -1.0 + math.sqrt(l1), math.sqrt(l2)


@functools.lru_cache(maxsize=None)
def _tabulated_curve():
    v = np.geomspace(1e-4, 1e5, 4000)
    pts = np.array([_curve_at_v(x) for x in v])
    return v, pts[:, 0], pts[:, 1]


def gamma_on_curve(epsilon: float) -> float:
    """``gamma`` of the point of L at height ``epsilon`` (eps is monotone along L)."""
    v, _, e = _tabulated_curve()
    if not e[-1] < epsilon < e[0]:
        raise ParameterError(f"epsilon={epsilon} outside the tabulated range of the curve L")
    i = int(np.searchsorted(-e, -epsilon))
    lo, hi = v[i - 1], v[i]
    v_star = brentq(lambda x: _curve_at_v(x)[1] - epsilon, lo, hi, xtol=1e-14, rtol=1e-15)
    return _curve_at_v(v_star)[0]


def distance_to_curve(gamma: float, epsilon: float) -> float:
    _, g, e = _tabulated_curve()
    p = np.array([gamma, epsilon])
    a = np.stack([g[:-1], e[:-1]], axis=1)
    b = np.stack([g[1:], e[1:]], axis=1)
    ab = b - a
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0)
    closest = a + t[:, None] * ab
    return float(np.min(np.hypot(*(closest - p).T)))


def classify_domain(gamma_real: float, epsilon: float, near_tol: float = NEAR_L_TOL) -> Domain:
    """Side of the curve L on which the real pair ``(gamma, eps)`` lies.

    D+ (two zeros) is the side containing small ``gamma``; D- lies beyond the
    curve.  Points within ``near_tol`` of L are reported as NearL.
    """
    if epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    if distance_to_curve(gamma_real, epsilon) < near_tol:
        return Domain.NearL
    return Domain.DPlus if gamma_real < gamma_on_curve(epsilon) else Domain.DMinus
