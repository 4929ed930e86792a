"""Gap probabilities for the cubic-sine and Painleve-II kernels via
high-precision Fredholm determinants.

The pieces, bottom up: double-double arithmetic, Gauss-Legendre rules and
an extended-precision LU (`mpnum`); Airy functions and the expansion
constants (`specfun`); the Hastings-McLeod solution and its tail integral
(`painleve2`); the transported linear-system columns (`psi`); the kernels
(`kernels`); Nystrom determinants and log-derivatives (`fredholm`); the
closed-form predictions and the exponent fit (`asympt`); and a CLI
(`cli`, installed as ``gapdet``).
"""

from .asympt import (
    AsymptoticPrediction,
    dyson_sine_prediction,
    fcet_fit,
    logsasy_prediction,
    logxasy_prediction,
    theorem1_prediction,
    theorem2_prediction,
)
from .fredholm import (
    DetEvaluation,
    DetIntegrityError,
    dlogdet_ds,
    dlogdet_dx,
    log_det,
    log_det_converged,
)
from .kernels import (
    CubicSine,
    KernelIntegrityError,
    KernelSpec,
    PII,
    Sine,
    kernel_diag,
    kernel_eval,
    kernel_matrix,
)
from .mpnum import (
    ExtendedReal,
    LogDetResult,
    NewtonConvergenceError,
    QuadratureRule,
    SingularMatrixError,
    gauss_legendre,
    log_det_lu,
)
from .painleve2 import (
    HastingsMcLeodSolution,
    NewtonDivergenceError,
    WrongBranchError,
    solve_hm,
    tw_integral,
    v_at,
)
from .psi import (
    PhaseExtractedColumn,
    PsiField,
    StiffnessError,
    psi_column,
    psi_column_derivative,
    psi_column_ray,
    psi_columns,
    psi_det,
)
from .specfun import CONSTANTS, Constants, airy_ai, airy_ai_prime, zeta_prime_minus1

__version__ = "0.1.0"

__all__ = [
    "AsymptoticPrediction",
    "CONSTANTS",
    "Constants",
    "CubicSine",
    "DetEvaluation",
    "DetIntegrityError",
    "ExtendedReal",
    "HastingsMcLeodSolution",
    "KernelIntegrityError",
    "KernelSpec",
    "LogDetResult",
    "NewtonConvergenceError",
    "NewtonDivergenceError",
    "PII",
    "PhaseExtractedColumn",
    "PsiField",
    "QuadratureRule",
    "Sine",
    "SingularMatrixError",
    "StiffnessError",
    "WrongBranchError",
    "airy_ai",
    "airy_ai_prime",
    "dlogdet_ds",
    "dlogdet_dx",
    "dyson_sine_prediction",
    "fcet_fit",
    "gauss_legendre",
    "kernel_diag",
    "kernel_eval",
    "kernel_matrix",
    "log_det",
    "log_det_converged",
    "log_det_lu",
    "logsasy_prediction",
    "logxasy_prediction",
    "psi_column",
    "psi_column_derivative",
    "psi_column_ray",
    "psi_columns",
    "psi_det",
    "solve_hm",
    "theorem1_prediction",
    "theorem2_prediction",
    "tw_integral",
    "v_at",
    "zeta_prime_minus1",
]
