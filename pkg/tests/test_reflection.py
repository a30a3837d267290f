import cmath
import math
from dataclasses import replace

import numpy as np
import pytest

from oracles import integrals as O
from plasmarefl import (
    DegenerateDenominatorError,
    ParameterError,
    amplitude_ratio,
    flow_diagnostics,
    make_params,
    m_cont,
    m_discrete,
    q_weight,
    qm_integral,
    reflect,
    solve_dispersion,
)
from plasmarefl import dispersion as d
from plasmarefl import reflection as rf
from plasmarefl.quadrature import DEFAULT_SPEC

SOLUTIONS = [(0.01, 1e-3), (0.1, 0.01), (0.2, 0.1), (0.3, 0.05)]


def rel(a, b):
    return abs(a - b) / abs(b)


def eta0_of(p):
    return (1 + p.gamma + 1j * p.epsilon) / p.k


@pytest.fixture(scope="module")
def golden_results():
    p = solve_dispersion(0.1, 0.01)
    qm = qm_integral(p)
    return {a: amplitude_ratio(p, a, qm=qm) for a in (0.0, 0.1, 0.5, 1.0)}


# --- m(zeta) ----------------------------------------------------------------

@pytest.mark.parametrize("k,eps", SOLUTIONS)
def test_m_discrete_matches_quadrature(k, eps):
    p = solve_dispersion(k, eps)
    for s in (1, -1):
        z = s * eta0_of(p)
        assert rel(m_discrete(z, p), O.m_discrete(z, eps, p.gamma)) < 1e-10


def test_m_discrete_off_axis_points():
    p = make_params(0.1, 0.2 - 0.05j)
    for z in (0.5 + 0.3j, -0.4, 1.5 - 0.2j, 1.99, 2.01j, -3 + 1j):
        assert rel(m_discrete(z, p), O.m_discrete(z, 0.1, 0.2 - 0.05j)) < 1e-10


def test_m_discrete_vanishes_at_eta1():
    p = make_params(0.3, 0.1 - 0.05j)
    z = cmath.sqrt(p.eta1_sq)
    assert abs(m_discrete(z, p)) < 1e-15
    assert abs(m_discrete(-z, p)) < 1e-15


def test_m_discrete_series_switch_continuous():
    p = make_params(0.1, 0.2 - 0.05j)
    for th in np.linspace(0.2, 3.0, 6):
        z_in = 1.999999 * np.exp(1j * th)
        z_out = 2.000001 * np.exp(1j * th)
        assert abs(m_discrete(z_in, p) - m_discrete(z_out, p)) < 1e-5


@pytest.mark.parametrize("k,eps", SOLUTIONS)
def test_m_difference(k, eps):
    p = solve_dispersion(k, eps)
    eta0 = eta0_of(p)
    direct = complex(O.m_discrete(eta0, eps, p.gamma)) - complex(O.m_discrete(-eta0, eps, p.gamma))
    assert rel(rf.m_discrete_difference(eta0, p), direct) < 1e-9


def test_m_discrete_vectorized():
    p = make_params(0.1, 0.2)
    z = np.array([3.0 + 1j, -0.5j, 1.5])
    out = m_discrete(z, p)
    assert out.shape == (3,)
    assert all(out[i] == m_discrete(z[i], p) for i in range(3))


# --- m(eta) on the cut ------------------------------------------------------

@pytest.mark.parametrize("eps,gamma", [(0.01, 0.003 - 0.005j), (0.1, 0.2 - 0.05j), (1.0, 0.5)])
def test_m_cont_matches_principal_value(eps, gamma):
    p = make_params(eps, gamma)
    for eta in (0.05, 0.3, 0.5, 0.8, 0.97):
        assert rel(m_cont(eta, p), O.m_cont(eta, eps, gamma)) < 1e-10


def test_m_cont_special_values():
    p = make_params(0.1, 0.2 - 0.05j)
    assert rel(m_cont(2 / 3, p), -0.5 * (4 / 9 - p.eta1_sq)) < 1e-13
    limit = -p.eta1_sq / 6 + 2 * p.c / 3
    assert abs(m_cont(1e-12, p) - limit) < 1e-9 * abs(limit)


def test_m_cont_rejects_endpoints():
    with pytest.raises(ParameterError):
        m_cont(0.0, make_params(0.1, 0))


# --- Q(eta) and Qm ----------------------------------------------------------

def test_q_weight_product_identity(golden_params):
    p = golden_params
    eta = np.linspace(0.01, 0.99, 50)
    q = q_weight(eta, p)
    num = (2 / 3) * eta * d.lam_plus_t_cut(eta, p) - d.lambda_inf(p) * eta**2
    plus, minus = d.lam_plus_minus(eta, p)
    assert np.max(np.abs(q * p.c * plus * minus - num) / np.abs(num)) < 1e-12


def test_q_weight_endpoints(golden_params):
    p = golden_params
    peak = np.max(np.abs(q_weight(np.linspace(0.01, 0.99, 99), p)))
    assert abs(q_weight(1e-9, p)) < 1e-6 * peak
    assert abs(q_weight(1 - 1e-12, p)) < 0.05 * peak


def _graded_gauss(f, n_panels=25, order=20):
    """Composite Gauss-Legendre on panels graded geometrically toward both ends."""
    inner = np.geomspace(1e-12, 0.5, n_panels)
    edges = np.concatenate([[0.0], inner, 1.0 - inner[::-1][1:], [1.0]])
    x, w = np.polynomial.legendre.leggauss(order)
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        total += 0.5 * (b - a) * np.dot(w, f(0.5 * (b - a) * x + 0.5 * (a + b)))
    return total


@pytest.mark.parametrize("k,eps", SOLUTIONS)
def test_qm_reference(k, eps):
    p = solve_dispersion(k, eps)
    val, err = qm_integral(p)
    ref = _graded_gauss(lambda x: m_cont(x, p) * q_weight(x, p))
    assert abs(val - ref) < 1e-8 * abs(ref)
    tight, _ = qm_integral(p, replace(DEFAULT_SPEC, rel_tol=1e-11, abs_tol=1e-13))
    assert abs(val - tight) < 1e-9 * abs(tight)
    assert err <= max(DEFAULT_SPEC.abs_tol, DEFAULT_SPEC.rel_tol * abs(val))


# --- amplitude ratio --------------------------------------------------------

def test_specular_limit(golden_results):
    r = golden_results[0.0]
    assert r.K == -1 and r.R == 1 and r.phi == math.pi


def test_golden_point_values(golden_results):
    r = golden_results[0.5]
    assert r.R == pytest.approx(0.9794729391749188, rel=1e-12)
    assert r.Qm == pytest.approx(0.02355406175985440 + 3.501090364344158e-05j, rel=1e-9)


def test_reflectance_decreases_with_accommodation(golden_results):
    rs = [golden_results[a].R for a in (0.0, 0.1, 0.5, 1.0)]
    assert all(x > y for x, y in zip(rs, rs[1:]))
    assert all(0 < x <= 1 for x in rs)


def test_dual_forms_agree(golden_results):
    for r in golden_results.values():
        assert r.dual_rel_diff < 1e-12
        assert abs(r.K - r.K_alt) < 1e-12 * abs(r.K)


def test_result_fields_consistent(golden_results):
    r = golden_results[0.5]
    assert r.D_val == pytest.approx(r.B_val / r.A_val, rel=1e-15)
    assert r.C_val == pytest.approx(0.5 / 36 + 0.5 * r.Qm, rel=1e-15)
    assert r.phi == pytest.approx(cmath.phase(r.K), abs=1e-15)
    assert r.eta0_residual < 1e-12


def test_continuity_in_alpha():
    p = solve_dispersion(0.15, 1e-3)
    qm = qm_integral(p)
    a = np.linspace(0, 1, 41)
    R = np.array([amplitude_ratio(p, x, qm=qm).R for x in a])
    assert np.all(np.diff(R) < 0)
    assert np.max(np.abs(np.diff(R, 2))) < 1e-3


def test_degenerate_denominator():
    p = solve_dispersion(0.1, 0.01)
    r = amplitude_ratio(p, 0.5, qm=(0.0, 0.0))
    # pick Qm so that alpha m(eta0) A + B C cancels exactly
    C = -0.5 * r.m_plus * r.A_val / r.B_val
    qm = (C - 0.5 / 36) / 0.5
    with pytest.raises(DegenerateDenominatorError):
        amplitude_ratio(p, 0.5, qm=(qm, 0.0))


@pytest.mark.parametrize("alpha", [-0.1, 1.5, math.nan])
def test_alpha_out_of_range(alpha):
    with pytest.raises(ParameterError):
        reflect(0.1, 0.01, alpha)


def test_explicit_eta0_must_be_right_half_plane():
    p = solve_dispersion(0.1, 0.01)
    with pytest.raises(ParameterError):
        amplitude_ratio(p, 0.5, eta0=-eta0_of(p))


def test_reflect_matches_amplitude_ratio(golden_results):
    assert reflect(0.1, 0.01, 0.5).K == golden_results[0.5].K


@pytest.mark.parametrize("k", [0.01, 0.1, 0.3])
@pytest.mark.parametrize("eps", [1e-3, 0.1])
def test_reflectance_bounded(k, eps):
    for a in (0.0, 0.5, 1.0):
        assert reflect(k, eps, a).R <= 1 + 1e-9


# --- flow diagnostics -------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0])
def test_flow_balance(golden_results, alpha):
    diag = flow_diagnostics(golden_results[alpha])
    assert diag.balance_rel < 1e-8
    assert abs(diag.alpha_recovered - alpha) < 1e-8
    assert diag.bc_residual < 1e-8
    assert abs(diag.e0) < 1e-10
    assert diag.P_s == pytest.approx(diag.A_s / 3, rel=1e-15)


def test_flow_specular_has_no_surface_flow(golden_results):
    diag = flow_diagnostics(golden_results[0.0])
    assert diag.A1 == 0 and diag.z0A1 == 0
    assert diag.balance_rel < 1e-8


def test_flow_from_params(golden_params):
    a = flow_diagnostics(golden_params, alpha_p=0.5)
    assert a.balance_rel < 1e-8
    with pytest.raises(ParameterError):
        flow_diagnostics(golden_params)


def test_aliases():
    assert rf.Q_weight is q_weight and rf.Qm_integral is qm_integral
