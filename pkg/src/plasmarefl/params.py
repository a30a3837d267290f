"""Dimensionless parameter bundle for the half-space reflection problem.

All quantities are in the kinetic model's dimensionless variables:
``epsilon`` is the collision rate over the plasma frequency, ``gamma`` the
frequency detuning ``omega/omega_p - 1`` (complex when the frequency is),
and ``k`` the wave number in units of ``omega_p / v_F``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import ParameterError


@dataclass(frozen=True)
class PlasmaParams:
    """Parameters of one reflection problem plus their derived constants.

    Build instances with :func:`make_params`; the derived fields are not
    checked when the dataclass is constructed directly.

    Attributes
    ----------
    epsilon : float
        Collision parameter, strictly positive.
    gamma : complex
        Frequency detuning.
    omega1 : complex
        ``(1 + gamma) / epsilon``.
    z0 : complex
        ``1 - 1j * omega1``.
    eta1_sq : complex
        ``epsilon**2 * z0 / 3``.
    c : complex
        ``2 * eta1_sq * z0``.
    k : float or None
        Wave number, recorded when the parameters come from a dispersion
        solve.
    """

    epsilon: float
    gamma: complex
    omega1: complex
    z0: complex
    eta1_sq: complex
    c: complex
    k: Optional[float] = None

    @property
    def w(self) -> complex:
        """``1 + gamma + 1j*epsilon``; equals ``1j * epsilon * z0``."""
        return 1.0 + self.gamma + 1j * self.epsilon

    @property
    def inv_z0(self) -> complex:
        # i*eps/(1+gamma+i*eps) avoids forming the large z0 when eps is small
        return 1j * self.epsilon / self.w

    @property
    def inv_z0_eta1_sq(self) -> complex:
        """``1 / (z0 * eta1_sq)`` written as ``-3 / (1 + gamma + 1j*eps)**2``."""
        return -3.0 / self.w**2

    def with_k(self, k: float) -> "PlasmaParams":
        return replace(self, k=_check_k(k))


def _check_k(k) -> float:
    k = float(k)
    if not math.isfinite(k) or k <= 0.0:
        raise ParameterError(f"wave number must be finite and positive, got {k!r}")
    return k


def make_params(epsilon: float, gamma: complex, k: Optional[float] = None) -> PlasmaParams:
    """Build a :class:`PlasmaParams` from the collision parameter and detuning.

    Raises
    ------
    ParameterError
        If ``epsilon <= 0`` or any input is not finite.
    """
    epsilon = float(epsilon)
    gamma = complex(gamma)
    if not math.isfinite(epsilon) or epsilon <= 0.0:
        raise ParameterError(f"epsilon must be finite and positive, got {epsilon!r}")
    if not cmath.isfinite(gamma):
        raise ParameterError(f"gamma must be finite, got {gamma!r}")
    if k is not None:
        k = _check_k(k)
    omega1 = (1.0 + gamma) / epsilon
    z0 = 1.0 - 1j * omega1
    eta1_sq = epsilon**2 * z0 / 3.0
    c = 2.0 * eta1_sq * z0
    return PlasmaParams(epsilon, gamma, omega1, z0, eta1_sq, c, k)


def eta0_from_k(params: PlasmaParams, k: float) -> complex:
    """Separation parameter of the reflected mode, ``(1 + gamma + i*eps) / k``."""
    k = _check_k(k)
    return params.w / k
