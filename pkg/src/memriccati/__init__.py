"""Solver for the Riccati equation with variable-order memory operators.

The library discretizes a hereditary Riccati-type equation whose memory
kernel carries a fractional order that may vary with the current time or
with the time shift into the past, solves the resulting lower-triangular
nonlinear system by Newton-Raphson, and estimates convergence orders by
grid refinement.
"""

from .convergence import (
    ConvergenceReport,
    ConvergenceRow,
    LogBase,
    RefinementSchedule,
    observed_order,
    run_study,
    runge_error,
)
from .discretization import (
    WeightTable,
    build_weight_table,
    jacobian_entry,
    jacobian_matrix,
    residual,
    residual_vector,
    weights,
)
from .errors import NonConvergenceError, OrderBoundError, SingularJacobianError
from .newton import (
    LinearBackend,
    NewtonOutcome,
    NewtonSettings,
    solve,
    solve_linear,
)
from .oracle import (
    continuous_constant,
    continuous_ramp,
    rk4_classic,
    sequential_march,
)
from .orders import (
    CLAMP_MARGIN,
    Constant,
    LagSampling,
    OrderKind,
    OrderSpec,
    OrderValidation,
    Periodic,
    eval_order,
    validate_on_grid,
)
from .presets import PRESETS, ExperimentPreset
from .problem import (
    CoefficientSet,
    Grid,
    Problem,
    SolutionSeries,
    constant_coefficients,
    kernel_eval,
    ramp_coefficients,
)
from .special import gamma

__version__ = "0.1.0"

__all__ = [
    "CLAMP_MARGIN",
    "CoefficientSet",
    "Constant",
    "ConvergenceReport",
    "ConvergenceRow",
    "ExperimentPreset",
    "Grid",
    "LagSampling",
    "LinearBackend",
    "LogBase",
    "NewtonOutcome",
    "NewtonSettings",
    "NonConvergenceError",
    "OrderBoundError",
    "OrderKind",
    "OrderSpec",
    "OrderValidation",
    "PRESETS",
    "Periodic",
    "Problem",
    "RefinementSchedule",
    "SingularJacobianError",
    "SolutionSeries",
    "WeightTable",
    "build_weight_table",
    "constant_coefficients",
    "continuous_constant",
    "continuous_ramp",
    "eval_order",
    "gamma",
    "jacobian_entry",
    "jacobian_matrix",
    "kernel_eval",
    "observed_order",
    "ramp_coefficients",
    "residual",
    "residual_vector",
    "rk4_classic",
    "run_study",
    "runge_error",
    "sequential_march",
    "solve",
    "solve_linear",
    "validate_on_grid",
    "weights",
]
