import math

import numpy as np
import pytest
from scipy import integrate as si

from plasmarefl import ParameterError, QuadratureError, QuadratureSpec, integrate, integrate_pv
from plasmarefl import dispersion as d
from plasmarefl import make_params
from plasmarefl.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

KNOWN = [
    (lambda x: x, 0, 1, 0.5, None),
    (lambda x: np.log(1 / x + 1), 0, 1, 2 * math.log(2), "left"),
    (lambda x: 1 / (x - 2j), -1, 1, complex(np.log((1 - 2j) / (-1 - 2j))), None),
    (np.exp, 0, 1, math.e - 1, None),
    (np.sin, 0, math.pi, 2.0, None),
    (lambda x: x**-0.5, 0, 1, 2.0, "left"),
    (lambda x: np.log(x), 0, 1, -1.0, "left"),
    (lambda x: np.sqrt(1 - x), 0, 1, 2 / 3, None),
    (lambda x: 1 / (1 + x * x), -5, 5, 2 * math.atan(5), None),
    (lambda x: np.cos(20 * x), 0, 1, math.sin(20) / 20, None),
    (lambda x: x**5 - x, -2, 3, (3**6 - 2**6) / 6 - (9 - 4) / 2, None),
    (lambda x: np.exp(1j * x), 0, 2, complex((np.exp(2j) - 1) / 1j), None),
    (lambda x: np.log(x) * np.log(1 - x), 0, 1, 2 - math.pi**2 / 6, "both"),
    (lambda x: np.log(1 - x), 0, 1, -1.0, "right"),
    (lambda x: x * np.log(x), 0, 1, -0.25, "left"),
    (lambda x: np.exp(-x * x), -6, 6, math.sqrt(math.pi) * math.erf(6), None),
    (lambda x: 1 / (x + 0.01), 0, 1, math.log(101), None),
    (lambda x: np.abs(x - 0.3), 0, 1, 0.5 * (0.09 + 0.49), None),
    (lambda x: x * np.log(1 / x + 1), 0, 1, 0.5, "left"),
    (lambda x: np.tanh(x), -1, 2, math.log(math.cosh(2) / math.cosh(1)), None),
]


def test_rule_constants():
    assert NODES.shape == (15,) and np.all(np.diff(NODES) > 0)
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    # Kronrod rule is exact for degree 22
    assert np.dot(KRONROD_WEIGHTS, NODES**22) == pytest.approx(2 / 23, rel=1e-14)


def test_known_integrals_and_conservative_error():
    for f, a, b, exact, grade in KNOWN:
        val, err = integrate(f, a, b, grade=grade)
        actual = abs(val - exact)
        assert actual <= max(1e-11, 1e-9 * abs(exact)), (a, b, exact, val)
        # the estimate may only fall short by the rounding floor
        assert actual <= max(err, 8e-16 * max(1, abs(exact))), (exact, actual, err)


def test_matches_scipy(rng):
    for _ in range(10):
        c = rng.uniform(0.1, 3, 3)
        f = lambda x: c[0] * np.exp(-c[1] * x) * np.cos(c[2] * x)
        val, _ = integrate(f, 0.0, 2.0)
        ref = si.quad(f, 0.0, 2.0, epsabs=1e-13, epsrel=1e-12)[0]
        assert abs(val - ref) < 1e-12


def test_principal_values():
    val, _ = integrate_pv(lambda x: np.ones_like(x), -1, 1, 0.0)
    assert abs(val) < 1e-14
    val, _ = integrate_pv(lambda x: x, 0, 1, 0.5)
    assert val == pytest.approx(1 + 0.5 * math.log(1.0), abs=1e-12)
    val, _ = integrate_pv(lambda x: x, -1, 1, 0.5)
    assert val == pytest.approx(2 + 0.5 * math.log(1 / 3), rel=1e-12)


def test_pv_reproduces_principal_dispersion():
    p = make_params(0.1, 0.2 - 0.05j)
    mu = 0.3
    pv, _ = integrate_pv(lambda x: (p.eta1_sq - mu * x) + 0 * x, -1, 1, mu)
    lam_pv = 1 + (mu / p.c) * pv
    assert abs(lam_pv - d.lam_principal(mu, p)) < 1e-12


def test_subdivision_limit_raises_with_estimate():
    spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=3)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: np.cos(200 * x), 0, 10, spec)
    assert info.value.value is not None and info.value.error > 0


def test_non_finite_integrand_raises():
    with np.errstate(divide="ignore", invalid="ignore"):
        with pytest.raises(QuadratureError):
            integrate(lambda x: 1 / (x - 0.5) ** 2, 0, 1)


@pytest.mark.parametrize("kwargs", [dict(abs_tol=0), dict(rel_tol=-1), dict(max_subdivisions=0),
                                    dict(endpoint_clearance=0)])
def test_spec_validation(kwargs):
    with pytest.raises(ParameterError):
        QuadratureSpec(**kwargs)


def test_bad_limits():
    with pytest.raises(ParameterError):
        integrate(np.sin, 1, 0)
    with pytest.raises(ParameterError):
        integrate_pv(np.sin, 0, 1, 1.0)
