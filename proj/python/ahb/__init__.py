"""Adaptive heavy-ball iterative regularization for ill-posed inverse problems.

Thin Python layer over the C++ core: weighted-grid vectors, the AHB and
Landweber-type solvers with discrepancy-principle stopping, the nu-method and
Nesterov baselines, total-variation denoising via PDHG, and the built-in test
problems (Fredholm integral equation, 2-D tomography, elliptic coefficient
identification).
"""

from ._core import (
    ErrorMode,
    ForwardProblem,
    GridVector,
    QuadraticReg,
    Regularizer,
    RunRecord,
    SolverConfig,
    StepRule,
    TomoGeometry,
    TvQuadraticReg,
    add_noise_exact,
    add_noise_relative,
    ahb_solve,
    bregman_distance,
    build_elliptic,
    build_fredholm,
    build_tomo,
    default_elliptic_parameter,
    discrete_divergence,
    discrete_gradient,
    estimate_operator_norm,
    euclidean,
    fredholm_kernel,
    inner,
    landweber_solve,
    nesterov_solve,
    norm,
    nu_method_solve,
    pdhg_denoise,
    shepp_logan,
    tv_value,
)

__all__ = [
    "ErrorMode",
    "ForwardProblem",
    "GridVector",
    "QuadraticReg",
    "Regularizer",
    "RunRecord",
    "SolverConfig",
    "StepRule",
    "TomoGeometry",
    "TvQuadraticReg",
    "add_noise_exact",
    "add_noise_relative",
    "ahb_solve",
    "bregman_distance",
    "build_elliptic",
    "build_fredholm",
    "build_tomo",
    "default_elliptic_parameter",
    "discrete_divergence",
    "discrete_gradient",
    "estimate_operator_norm",
    "euclidean",
    "fredholm_kernel",
    "inner",
    "landweber_solve",
    "nesterov_solve",
    "norm",
    "nu_method_solve",
    "pdhg_denoise",
    "shepp_logan",
    "tv_value",
]

__version__ = "0.1.0"
