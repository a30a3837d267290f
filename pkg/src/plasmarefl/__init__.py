"""Reflection of a longitudinal plasma wave from the boundary of a degenerate plasma.

The solver works in dimensionless variables: wave number ``k``, collision
parameter ``eps`` and the normal momentum accommodation coefficient
``alpha_p`` of a specular accommodative wall.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DegenerateDenominatorError,
    ModeAbsentError,
    ParameterError,
    PlasmaReflError,
    QuadratureError,
    WindingError,
)
from .params import PlasmaParams, eta0_from_k, make_params
from .dispersion import (
    CutFunctionSample,
    LaurentCoeffs,
    aux_t,
    aux_t0,
    aux_t_cut,
    lam,
    lam_cut,
    lam_plus_t_cut,
    lam_prime,
    lambda_c,
    lambda_c_cut,
    laurent,
)
from .quadrature import QuadratureSpec, integrate, integrate_pv
from .spectrum import (
    Domain,
    DomainCurvePoint,
    SpectrumResult,
    classify_domain,
    count_zeros,
    domain_curve,
    find_eta0,
    solve_dispersion,
    winding_index,
)
from .reflection import (
    FlowDiagnostics,
    ReflectionResult,
    amplitude_ratio,
    flow_diagnostics,
    m_cont,
    m_discrete,
    q_weight,
    qm_integral,
    reflect,
)
from .asymptotics import LongWaveParams, longwave_params, longwave_reflectance
from .sweep import GridRange, SweepSpec, run_sweep

__all__ = [
    "ConvergenceError", "DegenerateDenominatorError", "ModeAbsentError", "ParameterError",
    "PlasmaReflError", "QuadratureError", "WindingError",
    "PlasmaParams", "eta0_from_k", "make_params",
    "CutFunctionSample", "LaurentCoeffs", "aux_t", "aux_t0", "aux_t_cut", "lam", "lam_cut",
    "lam_plus_t_cut", "lam_prime", "lambda_c", "lambda_c_cut", "laurent",
    "QuadratureSpec", "integrate", "integrate_pv",
    "Domain", "DomainCurvePoint", "SpectrumResult", "classify_domain", "count_zeros",
    "domain_curve", "find_eta0", "solve_dispersion", "winding_index",
    "FlowDiagnostics", "ReflectionResult", "amplitude_ratio", "flow_diagnostics", "m_cont",
    "m_discrete", "q_weight", "qm_integral", "reflect",
    "LongWaveParams", "longwave_params", "longwave_reflectance",
    "GridRange", "SweepSpec", "run_sweep",
]
