"""Independent reference computations used by the test and acceptance suites.

None of this is on the production solve path: rk4_classic integrates the
memoryless (order -> 1) limit with a classical fourth-order method, and
sequential_march solves the same nonlinear system one node at a time,
exploiting its triangular dependency structure.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .discretization import build_weight_table
from .errors import NonConvergenceError, SingularJacobianError
from .problem import Problem, SolutionSeries

TimeFunction = Callable[[float], float]


def continuous_ramp(horizon: float) -> tuple[TimeFunction, TimeFunction, TimeFunction]:
    """Continuum limit of the ramp coefficients: a(t) = -t/T, b = 0, c(t) = t/T."""
    return (lambda t: -t / horizon, lambda t: 0.0, lambda t: t / horizon)


def continuous_constant(a: float, b: float, c: float
                        ) -> tuple[TimeFunction, TimeFunction, TimeFunction]:
    return (lambda t: a, lambda t: b, lambda t: c)


def rk4_classic(a: TimeFunction, b: TimeFunction, c: TimeFunction,
                u0: float, horizon: float, steps: int) -> SolutionSeries:
    """Classical RK4 for u'(t) = -(a(t) u^2 + b(t) u + c(t)), u(0) = u0."""
    if steps < 1:
        raise ValueError("rk4 needs at least one step")
    h = horizon / steps

    def f(t: float, u: float) -> float:
        return -(a(t) * u * u + b(t) * u + c(t))

    values = np.empty(steps)
    u = u0
    for j in range(steps):
        t = j * h
        k1 = f(t, u)
        k2 = f(t + h / 2.0, u + h * k1 / 2.0)
        k3 = f(t + h / 2.0, u + h * k2 / 2.0)
        k4 = f(t + h, u + h * k3)
        u = u + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        values[j] = u
    times = np.arange(1, steps + 1) * h
    return SolutionSeries(times=times, values=values)


def sequential_march(problem: Problem, eps: float,
                     max_iterations: int = 100) -> SolutionSeries:
    """Solve node by node: scalar Newton on f_k with u_1 ... u_{k-1} fixed.

    Each scalar iteration starts from the previous node's value and stops
    when the update is at most ``eps``.  Reports the node index on failure.
    """
    if not eps > 0.0:
        raise ValueError("sequential march needs a positive tolerance")
    n = problem.grid.nodes
    table = build_weight_table(problem)
    a, b, c = problem.coefficients.table(n)

    u = np.empty(n)
    diffs = np.empty(n)     # d_j = u_j - u_{j-1}, filled as nodes resolve
    prev = problem.u0
    for k in range(1, n + 1):
        w = table.row(k)
        # Memory contribution from already-fixed differences (i >= 2).
        base = float(np.dot(w[1:k], diffs[k - 2:: -1])) if k > 1 else 0.0
        x = prev
        for _ in range(max_iterations):
            fx = w[0] * (x - prev) + base + a[k - 1] * x * x + b[k - 1] * x + c[k - 1]
            dfx = w[0] + 2.0 * a[k - 1] * x + b[k - 1]
            if abs(dfx) < 1e-14:
                raise SingularJacobianError(
                    f"scalar derivative vanished at node {k}"
                )
            dx = fx / dfx
            x -= dx
            if abs(dx) <= eps:
                break
        else:
            raise NonConvergenceError(f"scalar iteration stalled at node {k}")
        u[k - 1] = x
        diffs[k - 1] = x - prev
        prev = x
    return SolutionSeries(times=problem.grid.node_times(), values=u)
