"""Dispersion function of the kinetic problem and its companion integrals.

Every function here is a closed form.  Off the cut the principal branch of
the complex logarithm is used; the arguments are arranged so that the log
never crosses the negative real axis while ``z`` stays off the stated cut.

For ``|z| >= SERIES_RADIUS`` the closed forms suffer cancellation of order
``|z|**2`` or worse (the plasma-mode zero sits near ``1/k``), so convergent
expansions in ``1/z`` are used there instead.

Functions accept scalars or numpy arrays.  Scalars in, Python ``complex``
out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .params import PlasmaParams

SERIES_RADIUS = 2.0
# (1/SERIES_RADIUS)**_N_TERMS must sit well below double precision
_N_TERMS = 64


@dataclass(frozen=True)
class LaurentCoeffs:
    """Leading coefficients of ``lam(z) = lambda_inf + lambda2/z**2 + lambda4/z**4 + ...``."""

    lambda_inf: complex
    lambda2: complex
    lambda4: complex


@dataclass(frozen=True)
class CutFunctionSample:
    """Values of the cut functions at a point ``mu`` of (-1, 1)."""

    mu: float
    lambda_principal: complex
    lambda_plus: complex
    lambda_minus: complex
    T_value: complex
    lambda_plus_T: complex


def _out(arr, scalar):
    return complex(arr.reshape(-1)[0]) if scalar else arr


def _as_complex(z):
    scalar = np.ndim(z) == 0
    return np.atleast_1d(np.asarray(z, dtype=complex)), scalar


def _as_real(x):
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.iscomplexobj(x):
        raise ParameterError("cut functions take real arguments")
    return arr, scalar


def _check_off_segment(z, lo, hi, what):
    on = (z.imag == 0.0) & (z.real >= lo) & (z.real <= hi)
    if np.any(on) or not np.all(np.isfinite(z)):
        raise ParameterError(f"argument lies on the cut [{lo:g}, {hi:g}] or is not finite ({what})")


def _check_open_interval(x, lo, hi, what):
    if not np.all((x > lo) & (x < hi)):
        raise ParameterError(f"{what} requires arguments in ({lo:g}, {hi:g})")


def _power_series(w, coeffs):
    """sum_{n>=1} coeffs[n-1] * w**n, by Horner."""
    acc = np.zeros_like(w)
    for a in coeffs[::-1]:
        acc = (acc + a) * w
    return acc


_N = np.arange(1, _N_TERMS + 1)


# --- Case dispersion function ----------------------------------------------

def lambda_c(z):
    """Case dispersion function ``1 + (z/2) Log((z-1)/(z+1))`` off [-1, 1]."""
    z, scalar = _as_complex(z)
    _check_off_segment(z, -1.0, 1.0, "lambda_c")
    out = np.empty_like(z)
    big = np.abs(z) >= SERIES_RADIUS
    zs = z[~big]
    out[~big] = 1.0 + 0.5 * zs * np.log((zs - 1.0) / (zs + 1.0))
    if np.any(big):
        w2 = 1.0 / z[big] ** 2
        out[big] = -_power_series(w2, 1.0 / (2 * _N + 1))
    return _out(out, scalar)


def _lambda_c_prime(z):
    return 0.5 * np.log((z - 1.0) / (z + 1.0)) + z / (z * z - 1.0)


def lambda_c_cut(mu):
    """Principal value of the Case function on the cut: ``1 + (mu/2) ln((1-mu)/(1+mu))``."""
    mu, scalar = _as_real(mu)
    _check_open_interval(mu, -1.0, 1.0, "lambda_c_cut")
    out = 1.0 + 0.5 * mu * np.log((1.0 - mu) / (1.0 + mu))
    return float(out[0]) if scalar else out


# --- dispersion function ----------------------------------------------------

def _series_coeffs(p: PlasmaParams):
    # lam(z) - lambda_inf = sum_n a_n z**(-2n)
    return -p.inv_z0 / (2 * _N + 1) + p.inv_z0_eta1_sq / (2 * _N + 3)


def lam(z, params: PlasmaParams):
    """Dispersion function ``1 - 1/z0 + (1/z0)(1 - z**2/eta1_sq) lambda_c(z)``.

    Even in ``z``; defined off the cut [-1, 1].
    """
    z, scalar = _as_complex(z)
    _check_off_segment(z, -1.0, 1.0, "lam")
    p = params
    out = np.empty_like(z)
    big = np.abs(z) >= SERIES_RADIUS
    zs = z[~big]
    if zs.size:
        lc = 1.0 + 0.5 * zs * np.log((zs - 1.0) / (zs + 1.0))
        out[~big] = 1.0 - p.inv_z0 + p.inv_z0 * lc - zs * zs * p.inv_z0_eta1_sq * lc
    if np.any(big):
        w2 = 1.0 / z[big] ** 2
        out[big] = lambda_inf(p) + _power_series(w2, _series_coeffs(p))
    return _out(out, scalar)


def lam_prime(z, params: PlasmaParams):
    """Derivative of :func:`lam` from the closed form (odd in ``z``)."""
    z, scalar = _as_complex(z)
    _check_off_segment(z, -1.0, 1.0, "lam_prime")
    p = params
    out = np.empty_like(z)
    big = np.abs(z) >= SERIES_RADIUS
    zs = z[~big]
    if zs.size:
        lc = 1.0 + 0.5 * zs * np.log((zs - 1.0) / (zs + 1.0))
        dlc = _lambda_c_prime(zs)
        out[~big] = p.inv_z0 * dlc - p.inv_z0_eta1_sq * (2.0 * zs * lc + zs * zs * dlc)
    if np.any(big):
        w = 1.0 / z[big]
        # d/dz z**(-2n) = -2n z**(-2n-1)
        coeffs = -2.0 * _N * _series_coeffs(p)
        out[big] = w * _power_series(w * w, coeffs)
    return _out(out, scalar)


def lambda_inf(params: PlasmaParams) -> complex:
    """``lam(oo)`` in the cancellation-free rational form in (gamma, eps)."""
    g, e = params.gamma, params.epsilon
    return (2.0 * g + 1j * e + g * (g + 1j * e)) / params.w**2


def laurent(params: PlasmaParams, form: str = "rational") -> LaurentCoeffs:
    """Laurent coefficients at infinity.

    ``form="rational"`` uses the explicit (gamma, eps) expressions;
    ``form="designation"`` uses the z0/eta1_sq expressions.  The two agree
    up to rounding.
    """
    p = params
    if form == "rational":
        w, e = p.w, p.epsilon
        return LaurentCoeffs(
            lambda_inf(p),
            -(9.0 + 5j * e * w) / (15.0 * w**2),
            -(15.0 + 7j * e * w) / (35.0 * w**2),
        )
    if form == "designation":
        z0, e1 = p.z0, p.eta1_sq
        return LaurentCoeffs(
            1.0 - 1.0 / z0 + 1.0 / (3.0 * z0 * e1),
            -(1.0 / z0) * (1.0 / 3.0 - 1.0 / (5.0 * e1)),
            -(1.0 / z0) * (1.0 / 5.0 - 1.0 / (7.0 * e1)),
        )
    raise ValueError(f"unknown form {form!r}")


# --- values on the cut ------------------------------------------------------

def lam_principal(mu, params: PlasmaParams):
    """Principal-value ``lam(mu)`` for real ``mu`` in (-1, 1)."""
    mu, scalar = _as_real(mu)
    _check_open_interval(mu, -1.0, 1.0, "lam_principal")
    p = params
    l0 = 1.0 + 0.5 * mu * np.log((1.0 - mu) / (1.0 + mu))
    out = 1.0 - p.inv_z0 + p.inv_z0 * l0 - mu * mu * p.inv_z0_eta1_sq * l0
    return _out(out, scalar)


def _half_jump(mu, p: PlasmaParams):
    # i*pi*mu*(eta1_sq - mu**2)/c
    return 0.5j * np.pi * mu * (p.inv_z0 - mu * mu * p.inv_z0_eta1_sq)


def lam_plus_minus(mu, params: PlasmaParams):
    """Boundary values ``(lam+(mu), lam-(mu))`` from above and below the cut."""
    lp = np.asarray(lam_principal(mu, params))
    d = _half_jump(np.asarray(mu, dtype=float), params)
    plus, minus = lp + d, lp - d
    if np.ndim(mu) == 0:
        return complex(plus), complex(minus)
    return plus, minus


def lam_plus_minus_product(mu, params: PlasmaParams):
    """``lam+ * lam-`` as ``lam**2 + [pi mu (eta1_sq - mu**2)/c]**2``."""
    lp = np.asarray(lam_principal(mu, params))
    d = _half_jump(np.asarray(mu, dtype=float), params)
    out = lp * lp - d * d
    return complex(out) if np.ndim(mu) == 0 else out


def aux_t_cut(eta, params: PlasmaParams):
    """``T(eta) = (eta/c) [1 + (eta**2 - eta1_sq) ln(1/eta**2 - 1)]`` for eta in (0, 1)."""
    eta, scalar = _as_real(eta)
    _check_open_interval(eta, 0.0, 1.0, "aux_t_cut")
    p = params
    e2 = eta * eta
    out = 0.5 * eta * (p.inv_z0_eta1_sq + (e2 * p.inv_z0_eta1_sq - p.inv_z0) * np.log(1.0 / e2 - 1.0))
    return _out(out, scalar)


def lam_plus_t_cut(eta, params: PlasmaParams):
    """``lam(eta) + T(eta)`` on (0, 1) without any principal-value term."""
    eta, scalar = _as_real(eta)
    _check_open_interval(eta, 0.0, 1.0, "lam_plus_t_cut")
    p = params
    inv_c = 0.5 * p.inv_z0_eta1_sq
    coef = 0.5 * (eta * eta * p.inv_z0_eta1_sq - p.inv_z0)  # (eta**2 - eta1_sq)/c
    out = 1.0 + inv_c * (eta - 2.0 * eta * eta) + 2.0 * eta * coef * np.log(1.0 / eta + 1.0)
    return _out(out, scalar)


def lam_cut(mu: float, params: PlasmaParams) -> CutFunctionSample:
    """All cut functions at one point; ``mu = 0`` returns the analytic limits."""
    mu = float(mu)
    if not -1.0 < mu < 1.0:
        raise ParameterError(f"lam_cut requires |mu| < 1, got {mu!r}")
    if mu == 0.0:
        return CutFunctionSample(0.0, 1 + 0j, 1 + 0j, 1 + 0j, 0j, 1 + 0j)
    lp = lam_principal(mu, params)
    plus, minus = lam_plus_minus(mu, params)
    a = abs(mu)
    t = aux_t_cut(a, params) * np.sign(mu)
    lpt = lam_plus_t_cut(a, params) if mu > 0 else lp + t
    return CutFunctionSample(mu, lp, plus, minus, complex(t), complex(lpt))


# --- auxiliary integrals off the cut ---------------------------------------

def aux_t0(z, params: PlasmaParams):
    """``T0(z) = (1/c) int_0^1 (eta**2 - eta1_sq)/(eta - z) d eta`` in closed form.

    Equal to ``(1/c)[1/2 + z + (z**2 - eta1_sq) Log((z - 1)/z)]`` for z off [0, 1].
    """
    z, scalar = _as_complex(z)
    _check_off_segment(z, 0.0, 1.0, "aux_t0")
    p = params
    out = np.empty_like(z)
    big = np.abs(z) >= SERIES_RADIUS
    zs = z[~big]
    if zs.size:
        inv_c = 0.5 * p.inv_z0_eta1_sq
        coef = 0.5 * (zs * zs * p.inv_z0_eta1_sq - p.inv_z0)
        out[~big] = inv_c * (0.5 + zs) + coef * np.log((zs - 1.0) / zs)
    if np.any(big):
        coeffs = 0.5 * p.inv_z0 / _N - 0.5 * p.inv_z0_eta1_sq / (_N + 2)
        out[big] = _power_series(1.0 / z[big], coeffs)
    return _out(out, scalar)


def aux_t(z, params: PlasmaParams):
    """``T(z) = z T0(z) + z T0(-z)``, odd in ``z``, defined off [-1, 1]."""
    z, scalar = _as_complex(z)
    _check_off_segment(z, -1.0, 1.0, "aux_t")
    p = params
    out = np.empty_like(z)
    big = np.abs(z) >= SERIES_RADIUS
    zs = z[~big]
    if zs.size:
        out[~big] = zs * (aux_t0(zs, p) + aux_t0(-zs, p))
    if np.any(big):
        w = 1.0 / z[big]
        # sum_n w**(2n-1) (inv_z0/(2n) - inv_z0_eta1_sq/(2n+2))
        coeffs = p.inv_z0 / (2 * _N) - p.inv_z0_eta1_sq / (2 * _N + 2)
        out[big] = _power_series(w * w, coeffs) / w
    return _out(out, scalar)


# names matching the mathematical notation
lambda_prime = lam_prime
lambda_cut = lam_cut
T0 = aux_t0
T = aux_t
T_cut = aux_t_cut
lambda_plus_T_cut = lam_plus_t_cut
