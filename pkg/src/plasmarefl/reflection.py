"""Amplitude ratio of the reflected and incident plasma waves.

With the incident amplitude normalized to one, the boundary value of the
distribution function is

    z0 h(0, mu) = K F(eta0, mu) + F(-eta0, mu) + int_0^1 F(eta, mu) E(eta) d eta,

where ``F(zeta, mu) = (zeta mu - eta1_sq)/(zeta - mu)`` for the discrete
modes and the continuous-spectrum eigenfunction carries the extra term
``-c lam(eta)/eta * delta(eta - mu)``.  The continuous coefficient is
``E(eta) = z0 A1 Q(eta)``.  Moments of ``h(0, mu)`` against the weight
``mu**2 - 2 mu / 3`` give the accommodation condition that fixes ``K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from . import dispersion as disp
from .errors import DegenerateDenominatorError, ConvergenceError, ParameterError
from .params import PlasmaParams, eta0_from_k
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate, integrate_pv

DUAL_FORM_RTOL = 1e-10
DUAL_FORM_MIN_DEN = 1e-8
DEGENERACY_RTOL = 1e-10
QM_FLOOR = 1e-10

_N_TERMS = 64
_N = np.arange(1, _N_TERMS + 1)


def _weight_moment(p):
    """``int_0^1 (mu**2 - 2 mu/3) mu**p d mu``."""
    return 1.0 / (p + 3.0) - 2.0 / (3.0 * (p + 2.0))


@dataclass(frozen=True)
class ReflectionResult:
    """Solution of the reflection problem at one ``(k, eps, alpha_p)``.

    Attributes
    ----------
    K : complex
        Reflected-to-incident amplitude ratio.
    R, phi : float
        ``|K|**2`` and ``arg K`` in ``(-pi, pi]``.
    A_val, B_val, C_val, D_val : complex
        ``A = (2/3) T(eta0) - lambda_inf eta0``, ``B = (eta1_sq - eta0**2) lam'(eta0)``,
        ``C = (1 - alpha_p)/36 + alpha_p Qm`` and ``D = B/A``.
    Qm : complex
        ``int_0^1 m(eta) Q(eta) d eta``.
    quadrature_err : float
        Error estimate of ``Qm``.
    K_alt : complex
        ``K`` from the equivalent form ``-(a m(-eta0) A + B C)/(a m(eta0) A + B C)``.
    dual_rel_diff : float
        ``|K - K_alt| / |K|``.
    """

    K: complex
    R: float
    phi: float
    A_val: complex
    B_val: complex
    C_val: complex
    D_val: complex
    Qm: complex
    quadrature_err: float
    eta0: complex
    params: PlasmaParams
    alpha_p: float
    K_alt: complex = complex("nan")
    dual_rel_diff: float = math.nan
    m_plus: complex = complex("nan")
    m_minus: complex = complex("nan")
    eta0_residual: float = math.nan


# --- moment integrals -------------------------------------------------------

def _m_series_coeffs(p: PlasmaParams):
    # m(zeta) = 1/36 + sum_n zeta**(-n) [M(n+1) - eta1_sq M(n-1)]
    return _weight_moment(_N + 1) - p.eta1_sq * _weight_moment(_N - 1)


def m_discrete(zeta, params: PlasmaParams):
    """``m(zeta) = int_0^1 (mu**2 - 2mu/3)(zeta mu - eta1_sq)/(zeta - mu) d mu`` off [0, 1].

    Closed form ``(zeta**2 - eta1_sq)[1/6 - zeta + zeta (zeta - 2/3) Log(zeta/(zeta - 1))]``,
    replaced by its expansion in ``1/zeta`` for ``|zeta| >= 2``.
    """
    z, scalar = disp._as_complex(zeta)
    disp._check_off_segment(z, 0.0, 1.0, "m_discrete")
    p = params
    out = np.empty_like(z)
    big = np.abs(z) >= disp.SERIES_RADIUS
    zs = z[~big]
    if zs.size:
        out[~big] = (zs * zs - p.eta1_sq) * (
            1.0 / 6.0 - zs + zs * (zs - 2.0 / 3.0) * np.log(zs / (zs - 1.0))
        )
    if np.any(big):
        out[big] = 1.0 / 36.0 + disp._power_series(1.0 / z[big], _m_series_coeffs(p))
    return disp._out(out, scalar)


def m_discrete_difference(eta0: complex, params: PlasmaParams) -> complex:
    """``m(eta0) - m(-eta0)``, keeping only odd powers of ``1/eta0`` for large ``|eta0|``."""
    eta0 = complex(eta0)
    if abs(eta0) < disp.SERIES_RADIUS:
        return m_discrete(eta0, params) - m_discrete(-eta0, params)
    coeffs = _m_series_coeffs(params).copy()
    coeffs[1::2] = 0.0
    return complex(2.0 * disp._power_series(np.array([1.0 / eta0]), coeffs)[0])


def m_cont(eta, params: PlasmaParams):
    """``m(eta)`` for the continuous spectrum, ``0 < eta < 1``.

    ``(1/6 - eta)(eta**2 - eta1_sq) + (eta - 2/3)[-c + 2 eta**2 - eta (eta**2 - eta1_sq) ln((1 + eta)/eta)]``.
    """
    eta, scalar = disp._as_real(eta)
    disp._check_open_interval(eta, 0.0, 1.0, "m_cont")
    p = params
    d = eta * eta - p.eta1_sq
    out = (1.0 / 6.0 - eta) * d + (eta - 2.0 / 3.0) * (
        -p.c + 2.0 * eta * eta - eta * d * np.log((1.0 + eta) / eta)
    )
    return disp._out(out, scalar)


def q_weight(eta, params: PlasmaParams, lambda_inf: Optional[complex] = None):
    """Continuous-spectrum weight ``Q(eta)`` on ``0 < eta < 1``.

    ``Q = [(2/3) eta (lam + T) - lambda_inf eta**2] / (c lam+ lam-)``.
    """
    eta, scalar = disp._as_real(eta)
    disp._check_open_interval(eta, 0.0, 1.0, "q_weight")
    p = params
    linf = disp.lambda_inf(p) if lambda_inf is None else lambda_inf
    num = (2.0 / 3.0) * eta * disp.lam_plus_t_cut(eta, p) - linf * eta * eta
    den = disp.lam_plus_minus_product(eta, p)
    out = num * (0.5 * p.inv_z0_eta1_sq) / den
    return disp._out(out, scalar)


def qm_integral(params: PlasmaParams, spec: QuadratureSpec = DEFAULT_SPEC) -> Tuple[complex, float]:
    """``Qm = int_0^1 m(eta) Q(eta) d eta`` with panels graded toward both endpoints.

    Returns
    -------
    (value, err_estimate)
    """
    p = params
    linf = disp.lambda_inf(p)

    def f(eta):
        return m_cont(eta, p) * q_weight(eta, p, linf)

    return integrate(f, 0.0, 1.0, spec, grade="both", floor=QM_FLOOR)


# --- amplitude ratio --------------------------------------------------------

def _resolve_eta0(params: PlasmaParams, eta0: Optional[complex]) -> complex:
    if eta0 is not None:
        return complex(eta0)
    if params.k is None:
        raise ParameterError("eta0 is needed: pass it or use parameters from a dispersion solve")
    return eta0_from_k(params, params.k)


def _check_alpha(alpha_p) -> float:
    alpha_p = float(alpha_p)
    if not (0.0 <= alpha_p <= 1.0):
        raise ParameterError(f"alpha_p must lie in [0, 1], got {alpha_p!r}")
    return alpha_p


def amplitude_ratio(
    params: PlasmaParams,
    alpha_p: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    eta0: Optional[complex] = None,
    qm: Optional[Tuple[complex, float]] = None,
) -> ReflectionResult:
    """Amplitude ratio ``K``, reflectance and phase.

    Parameters
    ----------
    params : PlasmaParams
        Parameters at a plasma-mode solution; ``params.k`` supplies ``eta0``
        unless ``eta0`` is given.
    alpha_p : float
        Normal momentum accommodation coefficient in [0, 1].
    spec : QuadratureSpec
        Tolerances for ``Qm``.
    eta0 : complex, optional
        The plasma-mode zero.
    qm : (complex, float), optional
        Precomputed ``qm_integral(params, spec)``; it does not depend on ``alpha_p``.

    Raises
    ------
    DegenerateDenominatorError
        If ``alpha_p m(eta0) A + B C`` cancels to relative 1e-10.
    ConvergenceError
        If the two algebraic forms of ``K`` disagree beyond 1e-10 relative.
    """
    alpha_p = _check_alpha(alpha_p)
    p = params
    eta0 = _resolve_eta0(p, eta0)
    if eta0.real <= 0:
        raise ParameterError(f"eta0 must have a positive real part, got {eta0}")
    if qm is None:
        qm = qm_integral(p, spec)
    qm_val, qm_err = qm

    linf = disp.lambda_inf(p)
    A = (2.0 / 3.0) * disp.aux_t(eta0, p) - linf * eta0
    B = (p.eta1_sq - eta0 * eta0) * disp.lam_prime(eta0, p)
    C = (1.0 - alpha_p) / 36.0 + alpha_p * qm_val
    D = B / A
    mp = m_discrete(eta0, p)
    mm = m_discrete(-eta0, p)
    mdiff = m_discrete_difference(eta0, p)

    den_alt = alpha_p * mp * A + B * C
    if abs(den_alt) < DEGENERACY_RTOL * (abs(alpha_p * mp * A) + abs(B * C)):
        raise DegenerateDenominatorError(
            f"denominator cancels at alpha_p={alpha_p}, eta0={eta0}"
        )
    den = alpha_p * mp + C * D
    K = -1.0 + alpha_p * mdiff / den
    K_alt = -(alpha_p * mm * A + B * C) / den_alt
    K = complex(K.real + 0.0, K.imag + 0.0)
    rel = abs(K - K_alt) / max(abs(K), 1e-300)
    if abs(den) > DUAL_FORM_MIN_DEN and abs(den_alt) > DUAL_FORM_MIN_DEN and rel > DUAL_FORM_RTOL:
        raise ConvergenceError(f"forms of K disagree to {rel:.3g} relative")
    phi = math.atan2(K.imag, K.real)
    if phi == -math.pi:
        phi = math.pi
    return ReflectionResult(
        K=K, R=abs(K) ** 2, phi=phi,
        A_val=A, B_val=B, C_val=C, D_val=D,
        Qm=qm_val, quadrature_err=qm_err, eta0=eta0, params=p, alpha_p=alpha_p,
        K_alt=K_alt, dual_rel_diff=rel, m_plus=mp, m_minus=mm,
        eta0_residual=abs(disp.lam(eta0, p)),
    )


def reflect(
    k: float,
    epsilon: float,
    alpha_p: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ReflectionResult:
    """Solve the dispersion relation at ``(k, eps)`` and return the reflection result."""
    from .spectrum import solve_dispersion

    alpha_p = _check_alpha(alpha_p)
    return amplitude_ratio(solve_dispersion(k, epsilon), alpha_p, spec)


# --- flow diagnostics -------------------------------------------------------

@dataclass(frozen=True)
class FlowDiagnostics:
    """Boundary flows reconstructed from a reflection solution.

    ``momentum_balance`` is ``alpha_p P_r - alpha_p A_s/3 + A1 (1 - alpha_p)/36``
    and ``balance_rel`` that value over ``|alpha_p P_r|`` (or the largest term
    when ``alpha_p = 0``).  ``e0`` is the field at the wall, ``1 + K + int E``.
    ``bc_residual`` is the largest ``|h(0,mu) - h(0,-mu) - A1 (mu - 2/3)|``
    over ``bc_mu`` relative to ``|A1|`` (absolute when ``A1 = 0``).
    """

    P_i: complex
    P_r: complex
    P_s: complex
    A_s: complex
    A1: complex
    z0A1: complex
    e0: complex
    non_flow: complex
    momentum_balance: complex
    balance_rel: float
    alpha_recovered: complex
    bc_residual: float
    bc_mu: Tuple[float, ...] = field(default=())


def _inv_moment_series(p_pow: int, zeta, a: float, b: float):
    """``int_a^b mu**p / (zeta - mu) d mu`` by expansion in ``mu/zeta`` (``|zeta| >= 2``)."""
    j = np.arange(0, 80)
    e = p_pow + j + 1
    coeff = (b ** e - a ** e) / e
    w = 1.0 / zeta
    # sum_j coeff_j w**(j+1)
    acc = np.zeros_like(w)
    for cj in coeff[::-1]:
        acc = (acc + cj) * w
    return acc


def _inv_moment_closed(p_pow: int, zeta, a: float, b: float, log_term):
    total = zeta ** p_pow * log_term
    for j in range(p_pow):
        total = total - zeta ** (p_pow - 1 - j) * (b ** (j + 1) - a ** (j + 1)) / (j + 1)
    return total


def kernel_moment(p_pow: int, zeta, a: float, b: float, params: PlasmaParams):
    """``int_a^b mu**p (zeta mu - eta1_sq)/(zeta - mu) d mu`` for ``zeta`` off [a, b].

    Uses ``(zeta mu - eta1_sq)/(zeta - mu) = -zeta + (zeta**2 - eta1_sq)/(zeta - mu)``.
    """
    z = np.asarray(zeta, dtype=complex)
    plain = (b ** (p_pow + 1) - a ** (p_pow + 1)) / (p_pow + 1)
    big = np.abs(z) >= disp.SERIES_RADIUS
    inv = np.where(
        big,
        _inv_moment_series(p_pow, np.where(big, z, 4.0), a, b),
        _inv_moment_closed(p_pow, z, a, b, np.log((z - a) / np.where(big, 1.0, z - b))),
    )
    out = -z * plain + (z * z - params.eta1_sq) * inv
    return complex(out) if np.ndim(zeta) == 0 else out


def _kernel_moment_cut(p_pow: int, eta, a: float, b: float, params: PlasmaParams):
    """Same moment for real ``eta`` in (0, 1); principal value when ``a < eta < b``."""
    eta = np.asarray(eta, dtype=float)
    plain = (b ** (p_pow + 1) - a ** (p_pow + 1)) / (p_pow + 1)
    log_term = np.log(np.abs((eta - a) / (eta - b)))
    inv = _inv_moment_closed(p_pow, eta, a, b, log_term)
    return -eta * plain + (eta * eta - params.eta1_sq) * inv


def flow_diagnostics(
    result: Union[ReflectionResult, PlasmaParams],
    alpha_p: Optional[float] = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
    bc_mu: Tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9),
) -> FlowDiagnostics:
    """Reconstruct ``h(0, mu)`` moments from a solution and check the boundary conditions.

    ``result`` is a :class:`ReflectionResult`, or parameters at a plasma-mode
    solution together with ``alpha_p``.
    """
    if isinstance(result, PlasmaParams):
        if alpha_p is None:
            raise ParameterError("alpha_p is required when passing parameters")
        result = amplitude_ratio(result, alpha_p, spec)
    p = result.params
    eta0 = result.eta0
    K = result.K
    alpha = result.alpha_p
    z0A1 = (1.0 + K) * result.D_val
    linf = disp.lambda_inf(p)

    def E(eta):
        return z0A1 * q_weight(eta, p, linf)

    def moment(p_pow, a, b):
        """``z0 int_a^b mu**p h(0, mu) d mu``."""
        disc = K * kernel_moment(p_pow, eta0, a, b, p) + kernel_moment(p_pow, -eta0, a, b, p)
        if a >= 0.0:
            # principal value plus the delta term of the eigenfunction
            def f(eta):
                return (_kernel_moment_cut(p_pow, eta, a, b, p)
                        - p.c * disp.lam_principal(eta, p) * eta ** (p_pow - 1)) * E(eta)
        else:
            def f(eta):
                return _kernel_moment_cut(p_pow, eta, a, b, p) * E(eta)
        cont, _ = integrate(f, 0.0, 1.0, spec, grade="both", floor=QM_FLOOR)
        return (disc + cont) * p.inv_z0

    P_r = moment(2, 0.0, 1.0)
    P_i = moment(2, -1.0, 0.0)
    N_pos = moment(1, 0.0, 1.0)
    N_neg = moment(1, -1.0, 0.0)
    A_s = 2.0 * N_pos
    P_s = A_s / 3.0
    A1 = z0A1 * p.inv_z0
    balance = alpha * P_r - alpha * A_s / 3.0 + A1 * (1.0 - alpha) / 36.0
    scale = abs(alpha * P_r) if alpha > 0 else max(abs(P_r), abs(A1) / 36.0, 1e-300)
    e_int, _ = integrate(E, 0.0, 1.0, spec, grade="both", floor=QM_FLOOR)
    e0 = 1.0 + K + e_int
    den = P_i - P_s
    alpha_rec = (P_i - P_r) / den if den != 0 else complex("nan")

    def z0h(mu):
        val = K * (eta0 * mu - p.eta1_sq) / (eta0 - mu) + (eta0 * mu + p.eta1_sq) / (eta0 + mu)
        if mu > 0:
            v, _ = integrate_pv(lambda x: (mu * x - p.eta1_sq) * E(x), 0.0, 1.0, mu, spec,
                                grade="both")
            val += v - p.c * disp.lam_principal(mu, p) / mu * E(mu)
        else:
            v, _ = integrate(lambda x: (mu * x - p.eta1_sq) / (x - mu) * E(x), 0.0, 1.0, spec,
                             grade="both", floor=QM_FLOOR)
            val += v
        return val

    worst = 0.0
    for mu in bc_mu:
        r = abs((z0h(mu) - z0h(-mu)) - z0A1 * (mu - 2.0 / 3.0))
        worst = max(worst, r / abs(z0A1) if z0A1 != 0 else r)
    return FlowDiagnostics(
        P_i=P_i, P_r=P_r, P_s=P_s, A_s=A_s, A1=A1, z0A1=z0A1, e0=e0,
        non_flow=N_pos + N_neg, momentum_balance=balance, balance_rel=abs(balance) / scale,
        alpha_recovered=alpha_rec, bc_residual=worst, bc_mu=tuple(bc_mu),
    )


Q_weight = q_weight
Qm_integral = qm_integral
