"""Long-wave approximations of the dispersion solution.

For small ``k`` and ``eps`` the plasma-mode root is ``gamma ~ 0.3 k**2 - 0.5 i eps``.
The long-wave reflectance feeds the resulting parameters through the exact
``lam``, ``T``, ``m`` and ``Q`` machinery; only the dispersion solve is
replaced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from .params import PlasmaParams, make_params
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .reflection import ReflectionResult, amplitude_ratio


@dataclass(frozen=True)
class LongWaveParams:
    """Leading-order long-wave parameters.

    Attributes
    ----------
    gamma0, gamma1 : float
        ``0.3 k**2`` and ``-0.5 eps``.
    lambda_inf_lw : complex
        ``0.6 k**2 (1 - i eps)``.
    z0_lw : complex
        ``0.5 - i (1 + 0.3 k**2)/eps``.
    eta1_sq_lw : complex
        ``-i (eps/3)(1 + 0.3 k**2)``.
    eta0_lw : complex
        ``(1 + 0.3 k**2 + 0.5 i eps)/k``.
    """

    k: float
    epsilon: float
    gamma0: float
    gamma1: float
    lambda_inf_lw: complex
    z0_lw: complex
    eta1_sq_lw: complex
    eta0_lw: complex

    @property
    def gamma(self) -> complex:
        return complex(self.gamma0, self.gamma1)

    def to_params(self) -> PlasmaParams:
        """Full parameter bundle at ``gamma = gamma0 + i gamma1`` with ``k`` recorded."""
        return make_params(self.epsilon, self.gamma, self.k)


def longwave_params(k: float, epsilon: float) -> LongWaveParams:
    k, epsilon = float(k), float(epsilon)
    if not (math.isfinite(k) and k > 0):
        raise ParameterError(f"k must be positive, got {k!r}")
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise ParameterError(f"epsilon must be positive, got {epsilon!r}")
    s = 1.0 + 0.3 * k * k
    return LongWaveParams(
        k=k,
        epsilon=epsilon,
        gamma0=0.3 * k * k,
        gamma1=-0.5 * epsilon,
        lambda_inf_lw=0.6 * k * k * (1.0 - 1j * epsilon),
        z0_lw=0.5 - 1j * s / epsilon,
        eta1_sq_lw=-1j * (epsilon / 3.0) * s,
        eta0_lw=(s + 0.5j * epsilon) / k,
    )


def longwave_reflectance(
    k: float,
    epsilon: float,
    alpha_p: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ReflectionResult:
    """Reflection result with the long-wave root in place of the exact dispersion solve."""
    lw = longwave_params(k, epsilon)
    return amplitude_ratio(lw.to_params(), alpha_p, spec, eta0=lw.eta0_lw)
