import math

import numpy as np
import pytest

from plasmarefl import (
    ParameterError,
    amplitude_ratio,
    longwave_params,
    longwave_reflectance,
    make_params,
    reflect,
    solve_dispersion,
)
from plasmarefl import dispersion as d


def test_longwave_values():
    lw = longwave_params(0.1, 0.01)
    assert lw.gamma == pytest.approx(0.003 - 0.005j, rel=1e-15)
    assert lw.eta0_lw == pytest.approx((1.003 + 0.005j) / 0.1, rel=1e-15)
    assert lw.lambda_inf_lw == pytest.approx(0.006 * (1 - 0.01j), rel=1e-15)


def test_longwave_params_match_full_bundle():
    lw = longwave_params(0.05, 1e-3)
    p = lw.to_params()
    assert p.k == 0.05
    assert p.z0 == pytest.approx(lw.z0_lw, rel=1e-14)
    # full eta1_sq carries an extra eps**2/6 beyond the leading term
    assert abs(p.eta1_sq - lw.eta1_sq_lw - 1e-6 / 6) < 1e-15
    assert d.lambda_inf(p) == pytest.approx(lw.lambda_inf_lw, rel=1e-2)


@pytest.mark.parametrize("k,eps", [(0.0, 0.1), (0.1, 0.0), (-1.0, 0.1), (math.nan, 0.1)])
def test_longwave_rejects_bad_input(k, eps):
    with pytest.raises(ParameterError):
        longwave_params(k, eps)


def test_detuning_agrees_with_exact_solve():
    p = solve_dispersion(0.05, 1e-3)
    lw = longwave_params(0.05, 1e-3)
    assert abs(p.gamma - lw.gamma) < 1e-2 * abs(lw.gamma)


def test_detuning_error_is_higher_order():
    eps = 1e-4
    ks = np.array([0.01, 0.02, 0.04, 0.08])
    diff = np.array([abs(solve_dispersion(k, eps).gamma - longwave_params(k, eps).gamma) for k in ks])
    slope = np.polyfit(np.log(ks), np.log(diff), 1)[0]
    assert slope > 2
    # the leading imaginary correction is about -(2/15) eps k**2
    im = np.array([(solve_dispersion(k, eps).gamma - longwave_params(k, eps).gamma).imag for k in ks])
    assert np.all(np.abs(im / (eps * ks**2) + 2 / 15) < 0.02)


@pytest.mark.parametrize("k,eps", [(0.01, 1e-3), (0.05, 1e-3), (0.05, 1e-4)])
def test_reflectance_agrees_with_exact(k, eps):
    for a in (0.1, 0.5, 1.0):
        r_lw = longwave_reflectance(k, eps, a)
        r_ex = reflect(k, eps, a)
        assert abs(r_lw.R - r_ex.R) < 1e-2 * r_ex.R


def test_longwave_specular_limit():
    r = longwave_reflectance(0.1, 0.01, 0.0)
    assert r.K == -1 and r.R == 1


def test_phase_near_pi_for_every_alpha():
    # figure-6 regime: the phase stays close to pi, modulo 2 pi
    for eps in (1e-3, 1e-2, 1e-1):
        for a in (0.1, 0.5, 1.0):
            phi = reflect(0.2, eps, a).phi
            assert abs(math.remainder(phi - math.pi, 2 * math.pi)) < 0.1


def test_longwave_uses_supplied_root():
    lw = longwave_params(0.1, 0.01)
    r = longwave_reflectance(0.1, 0.01, 0.5)
    assert r.eta0 == lw.eta0_lw
    direct = amplitude_ratio(make_params(0.01, lw.gamma, 0.1), 0.5, eta0=lw.eta0_lw)
    assert r.K == direct.K


@pytest.mark.parametrize("k,eps,tol", [(0.1, 0.01, 5e-2), (0.05, 1e-3, 1e-2)])
def test_longwave_fields_close_to_exact(k, eps, tol):
    lw = longwave_params(k, eps)
    p = solve_dispersion(k, eps)
    exact = {
        "gamma": p.gamma, "lambda_inf": d.lambda_inf(p), "z0": p.z0,
        "eta1_sq": p.eta1_sq, "eta0": (1 + p.gamma + 1j * eps) / k,
    }
    approx = {
        "gamma": lw.gamma, "lambda_inf": lw.lambda_inf_lw, "z0": lw.z0_lw,
        "eta1_sq": lw.eta1_sq_lw, "eta0": lw.eta0_lw,
    }
    for name in exact:
        assert abs(approx[name] - exact[name]) < tol * abs(exact[name]), name
