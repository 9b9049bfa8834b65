"""Quadrature weights, residual vector and Jacobian of the difference scheme.

The memory operator at node k is approximated by

    sum_{i=1}^{k} w_i (u_{k-i+1} - u_{k-i}),

with first-order weights obtained from a piecewise-linear reconstruction of
u on each sub-interval:

    w_i = h^(-g_i) / Gamma(2 - g_i) * (i^(1-g_i) - (i-1)^(1-g_i)).

For a CURRENT_TIME order, g_i is frozen at the target node's time for the
whole row.  For a LAG_TIME order, g_i varies with i according to the
spec's :class:`~memriccati.orders.LagSampling` choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .orders import LagSampling, OrderKind, eval_order
from .problem import Grid, Problem
from .special import gamma


def _l1_row(h: float, orders: np.ndarray, gam: np.ndarray | None = None) -> np.ndarray:
    """Weights w_1 ... w_k from per-weight orders (length k array).

    Always evaluated through the same array operations so that runs whose
    order values coincide produce bitwise-identical weights regardless of
    the operator variant that generated them.
    """
    k = len(orders)
    orders = np.ascontiguousarray(orders)
    i = np.arange(1, k + 1, dtype=float)
    if gam is None:
        gam = np.array([gamma(2.0 - g) for g in orders])
    else:
        gam = np.ascontiguousarray(gam)
    one_minus = 1.0 - orders
    return h ** (-orders) / gam * (i ** one_minus - (i - 1.0) ** one_minus)


def _order_samples(problem: Problem) -> np.ndarray:
    """Order values at the argument set the scheme draws from.

    CURRENT_TIME: value at t_k for k = 1 ... N (index k-1).
    LAG_TIME: value at the sampling argument for index m = 0 ... N-1.
    """
    spec = problem.order
    h = problem.grid.step
    n = problem.grid.nodes
    if spec.kind is OrderKind.CURRENT_TIME:
        args = [k * h for k in range(1, n + 1)]
    elif spec.lag_sampling is LagSampling.LAG_MIDPOINT:
        args = [(m + 0.5) * h for m in range(n)]
    else:
        args = [m * h for m in range(n)]
    return np.array([eval_order(spec, a) for a in args])


def _weight_rows(problem: Problem) -> tuple[np.ndarray, ...]:
    spec = problem.order
    h = problem.grid.step
    n = problem.grid.nodes
    samples = _order_samples(problem)
    gam = np.array([gamma(2.0 - g) for g in samples])
    if spec.kind is OrderKind.CURRENT_TIME:
        # Row k: one frozen order, the value at t_k.
        return tuple(
            _l1_row(h, np.full(k, samples[k - 1]), np.full(k, gam[k - 1]))
            for k in range(1, n + 1)
        )
    if spec.lag_sampling is LagSampling.NODE_TIME:
        # Row k, weight i: order at (k - i) h; rows share the sample array.
        return tuple(
            _l1_row(h, samples[:k][::-1], gam[:k][::-1])
            for k in range(1, n + 1)
        )
    # Lag-window samplings give a row-independent weight sequence.
    full = _l1_row(h, samples, gam)
    return tuple(full[:k] for k in range(1, n + 1))


@dataclass(frozen=True, eq=False)
class WeightTable:
    """Per-target-node quadrature weights; rows[k-1] holds w_1 ... w_k."""

    grid: Grid
    rows: tuple[np.ndarray, ...]

    def row(self, k: int) -> np.ndarray:
        return self.rows[k - 1]


def build_weight_table(problem: Problem) -> WeightTable:
    """All weight rows for the problem's grid; validates finiteness/positivity."""
    rows = _weight_rows(problem)
    for k, row in enumerate(rows, start=1):
        if not np.all(np.isfinite(row)) or np.any(row <= 0.0):
            raise ValueError(f"weight row {k} contains a non-positive or "
                             f"non-finite entry")
    return WeightTable(grid=problem.grid, rows=rows)


def weights(problem: Problem, k: int) -> np.ndarray:
    """Weights w_1 ... w_k for target node k (1-based)."""
    if not 1 <= k <= problem.grid.nodes:
        raise ValueError(f"target node {k} outside 1 ... {problem.grid.nodes}")
    return _weight_rows(problem)[k - 1]


def _differences(u: np.ndarray, u0: float) -> np.ndarray:
    """d_j = u_j - u_{j-1} with u_0 = u0, for j = 1 ... N."""
    d = np.empty(len(u))
    d[0] = u[0] - u0
    d[1:] = u[1:] - u[:-1]
    return d


def residual_vector(
    problem: Problem,
    u: np.ndarray,
    table: WeightTable | None = None,
    coeff_arrays: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """All residuals f_1 ... f_N at the candidate values u."""
    n = problem.grid.nodes
    if len(u) != n:
        raise ValueError(f"candidate vector has length {len(u)}, expected {n}")
    if table is None:
        table = build_weight_table(problem)
    if coeff_arrays is None:
        coeff_arrays = problem.coefficients.table(n)
    a, b, c = coeff_arrays
    d = _differences(np.asarray(u, dtype=float), problem.u0)
    f = np.empty(n)
    for k in range(1, n + 1):
        memory = float(np.dot(table.row(k), d[k - 1:: -1]))
        f[k - 1] = memory + a[k - 1] * u[k - 1] ** 2 + b[k - 1] * u[k - 1] + c[k - 1]
    return f


def residual(problem: Problem, u: np.ndarray, k: int,
             table: WeightTable | None = None) -> float:
    """Residual f_k of the difference scheme at the candidate values u."""
    n = problem.grid.nodes
    if not 1 <= k <= n:
        raise ValueError(f"node index {k} outside 1 ... {n}")
    if table is None:
        table = build_weight_table(problem)
    a, b, c = problem.coefficients.table(n)
    d = _differences(np.asarray(u, dtype=float), problem.u0)
    memory = float(np.dot(table.row(k), d[k - 1:: -1]))
    return memory + a[k - 1] * u[k - 1] ** 2 + b[k - 1] * u[k - 1] + c[k - 1]


def jacobian_entry(problem: Problem, u: np.ndarray, n: int, m: int,
                   table: WeightTable | None = None) -> float:
    """d f_n / d u_m.  Zero above the diagonal: f_n only sees u_1 ... u_n."""
    nodes = problem.grid.nodes
    if not (1 <= n <= nodes and 1 <= m <= nodes):
        raise ValueError(f"indices ({n}, {m}) outside 1 ... {nodes}")
    if m > n:
        return 0.0
    if table is None:
        table = build_weight_table(problem)
    w = table.row(n)
    if m == n:
        a_n = problem.coefficients.a(n)
        b_n = problem.coefficients.b(n)
        return w[0] + 2.0 * a_n * u[n - 1] + b_n
    return w[n - m] - w[n - m - 1]


def jacobian_matrix(problem: Problem, u: np.ndarray,
                    table: WeightTable | None = None) -> np.ndarray:
    """Dense lower-triangular Jacobian of the residual vector."""
    n = problem.grid.nodes
    if table is None:
        table = build_weight_table(problem)
    a, b, _ = problem.coefficients.table(n)
    jac = np.zeros((n, n))
    for row in range(1, n + 1):
        w = table.row(row)
        jac[row - 1, row - 1] = w[0] + 2.0 * a[row - 1] * u[row - 1] + b[row - 1]
        if row > 1:
            jac[row - 1, : row - 1] = (w[1:row] - w[: row - 1])[::-1]
    return jac
