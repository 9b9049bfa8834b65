"""Newton-Raphson solve of the nonlinear difference system.

The system F(U) = 0 is lower-triangular in dependency, so the default
linear backend is forward substitution on the Jacobian rows (O(N^2) per
iteration).  A Gauss-Jordan backend that forms the explicit inverse is kept
for cross-checking; it is O(N^3) and numerically equivalent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .discretization import build_weight_table, jacobian_matrix, residual_vector
from .errors import NonConvergenceError, SingularJacobianError
from .problem import Problem, SolutionSeries


class LinearBackend(enum.Enum):
    TRIANGULAR = "triangular"
    GAUSS_JORDAN = "gauss-jordan"


@dataclass(frozen=True)
class NewtonSettings:
    """Iteration controls.

    ``initial_residual`` seeds the step norm r before the first iteration so
    the loop "repeat while r > eps" can start; None means 1000 * eps.
    """

    eps: float = 1e-4
    max_iterations: int = 100
    initial_residual: float | None = None
    linear_backend: LinearBackend = LinearBackend.TRIANGULAR
    singular_tolerance: float = 1e-14

    def __post_init__(self) -> None:
        if not self.eps > 0.0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.singular_tolerance > 0.0:
            raise ValueError("singular_tolerance must be positive")

    @property
    def seed_residual(self) -> float:
        if self.initial_residual is not None:
            return self.initial_residual
        return 1e3 * self.eps


@dataclass(frozen=True, eq=False)
class NewtonOutcome:
    solution: SolutionSeries
    iterations: int
    converged: bool
    last_step_norm: float


def _forward_substitution_rows(rows, diag_extra: np.ndarray, rhs: np.ndarray,
                               tol: float) -> np.ndarray:
    """Solve J delta = rhs using the ragged lower-triangular rows."""
    n = len(rhs)
    delta = np.empty(n)
    for row in range(1, n + 1):
        w = rows[row - 1]
        diag = w[0] + diag_extra[row - 1]
        if abs(diag) < tol:
            raise SingularJacobianError(
                f"Jacobian diagonal at node {row} is {diag!r}, below tolerance {tol!r}"
            )
        s = rhs[row - 1]
        if row > 1:
            off = w[1:row] - w[: row - 1]       # columns row-1 ... 1
            s -= float(np.dot(off, delta[row - 2:: -1]))
        delta[row - 1] = s / diag
    return delta


def _gauss_jordan_inverse(matrix: np.ndarray, tol: float) -> np.ndarray:
    """Explicit inverse by Gauss-Jordan elimination with partial pivoting."""
    n = matrix.shape[0]
    aug = np.hstack([np.array(matrix, dtype=float), np.eye(n)])
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(aug[col:, col])))
        pivot = aug[pivot_row, col]
        if abs(pivot) < tol:
            raise SingularJacobianError(
                f"Gauss-Jordan pivot in column {col + 1} is {pivot!r}, "
                f"below tolerance {tol!r}"
            )
        if pivot_row != col:
            aug[[col, pivot_row]] = aug[[pivot_row, col]]
        aug[col] /= aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0.0:
                aug[r] -= aug[r, col] * aug[col]
    return aug[:, n:]


def solve_linear(jacobian: np.ndarray, rhs: np.ndarray,
                 backend: LinearBackend = LinearBackend.TRIANGULAR,
                 singular_tolerance: float = 1e-14) -> np.ndarray:
    """Solve the lower-triangular system J delta = rhs.

    TRIANGULAR runs forward substitution and ignores entries above the
    diagonal; GAUSS_JORDAN forms the explicit inverse and multiplies.
    """
    jacobian = np.asarray(jacobian, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = len(rhs)
    if jacobian.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {jacobian.shape}")
    if backend is LinearBackend.GAUSS_JORDAN:
        return _gauss_jordan_inverse(jacobian, singular_tolerance) @ rhs
    delta = np.empty(n)
    for row in range(n):
        diag = jacobian[row, row]
        if abs(diag) < singular_tolerance:
            raise SingularJacobianError(
                f"diagonal entry at row {row + 1} is {diag!r}, below tolerance"
            )
        delta[row] = (rhs[row] - np.dot(jacobian[row, :row], delta[:row])) / diag
    return delta


def solve(problem: Problem, settings: NewtonSettings | None = None) -> NewtonOutcome:
    """Newton iteration U <- U - J(U)^-1 F(U), stopping at max-norm step <= eps.

    The initial guess is the constant extension of the initial value.
    Raises :class:`NonConvergenceError` when the iteration budget runs out
    and :class:`SingularJacobianError` on a vanishing diagonal or pivot.
    """
    if settings is None:
        settings = NewtonSettings()
    n = problem.grid.nodes
    table = build_weight_table(problem)
    coeff_arrays = problem.coefficients.table(n)
    a, b, _ = coeff_arrays

    u = np.full(n, problem.u0, dtype=float)
    step_norm = settings.seed_residual
    iterations = 0
    while step_norm > settings.eps:
        if iterations >= settings.max_iterations:
            raise NonConvergenceError(
                f"no convergence after {iterations} iterations; "
                f"last step norm {step_norm!r} > eps {settings.eps!r}"
            )
        f = residual_vector(problem, u, table, coeff_arrays)
        diag_extra = 2.0 * a * u + b
        if settings.linear_backend is LinearBackend.TRIANGULAR:
            delta = _forward_substitution_rows(
                table.rows, diag_extra, f, settings.singular_tolerance
            )
        else:
            jac = jacobian_matrix(problem, u, table)
            inverse = _gauss_jordan_inverse(jac, settings.singular_tolerance)
            delta = inverse @ f
        u = u - delta
        step_norm = float(np.max(np.abs(delta)))
        iterations += 1

    final = residual_vector(problem, u, table, coeff_arrays)
    series = SolutionSeries(
        times=problem.grid.node_times(),
        values=u,
        newton_iterations=iterations,
        final_residual_norm=float(np.max(np.abs(final))),
    )
    return NewtonOutcome(
        solution=series,
        iterations=iterations,
        converged=True,
        last_step_norm=step_norm,
    )
