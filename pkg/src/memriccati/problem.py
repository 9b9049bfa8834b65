"""Cauchy problem data: grid, coefficients, initial value, memory kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import OrderBoundError
from .orders import OrderKind, OrderSpec, eval_order, validate_on_grid
from .special import gamma


@dataclass(frozen=True)
class Grid:
    """Uniform grid over [0, T]: nodes t_k = k * h, h = T / N."""

    horizon: float
    nodes: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.horizon) and self.horizon > 0.0):
            raise ValueError(f"grid horizon must be positive, got {self.horizon!r}")
        if self.nodes < 1:
            raise ValueError(f"grid needs at least one node, got {self.nodes!r}")
        if abs(self.step * self.nodes - self.horizon) > 1e-12 * self.horizon:
            raise ValueError("grid step does not reproduce the horizon")

    @property
    def step(self) -> float:
        return self.horizon / self.nodes

    def times(self) -> np.ndarray:
        """All node times t_0 ... t_N."""
        return np.arange(self.nodes + 1) * self.step

    def node_times(self) -> np.ndarray:
        """Times of the unknowns, t_1 ... t_N."""
        return np.arange(1, self.nodes + 1) * self.step


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients a, b, c of the quadratic right-hand side, per node index."""

    a: Callable[[int], float]
    b: Callable[[int], float]
    c: Callable[[int], float]

    def table(self, nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Arrays of a_k, b_k, c_k for k = 1 ... nodes; rejects non-finite values."""
        ks = range(1, nodes + 1)
        arrays = tuple(
            np.array([fn(k) for k in ks], dtype=float)
            for fn in (self.a, self.b, self.c)
        )
        for name, arr in zip("abc", arrays):
            if not np.all(np.isfinite(arr)):
                k_bad = int(np.flatnonzero(~np.isfinite(arr))[0]) + 1
                raise ValueError(f"coefficient {name} is not finite at node {k_bad}")
        return arrays


def ramp_coefficients(nodes: int) -> CoefficientSet:
    """a_k = -k/N, b_k = 0, c_k = k/N: the saturation (S-curve) preset."""
    if nodes < 1:
        raise ValueError("ramp coefficients need a positive node count")
    n = float(nodes)
    return CoefficientSet(
        a=lambda k: -k / n,
        b=lambda k: 0.0,
        c=lambda k: k / n,
    )


def constant_coefficients(a: float, b: float, c: float) -> CoefficientSet:
    """Node-independent coefficients."""
    for name, v in (("a", a), ("b", b), ("c", c)):
        if not math.isfinite(v):
            raise ValueError(f"constant coefficient {name} must be finite")
    return CoefficientSet(a=lambda k: a, b=lambda k: b, c=lambda k: c)


def kernel_eval(spec: OrderSpec, t: float, tau: float) -> float:
    """Memory kernel K(t - tau) = (t - tau)^(-ord) / Gamma(1 - ord).

    The order is evaluated at the current time t (CURRENT_TIME) or at the
    shift t - tau (LAG_TIME).  Singular at tau == t.
    """
    if not (0.0 <= tau and math.isfinite(tau) and math.isfinite(t)):
        raise ValueError(f"kernel needs 0 <= tau < t, got t={t!r}, tau={tau!r}")
    if tau >= t:
        raise ValueError(f"kernel is singular at tau == t and undefined beyond "
                         f"(t={t!r}, tau={tau!r})")
    lag = t - tau
    if spec.kind is OrderKind.CURRENT_TIME:
        order = eval_order(spec, t)
    else:
        order = eval_order(spec, lag)
    return lag ** (-order) / gamma(1.0 - order)


@dataclass(frozen=True)
class Problem:
    """Cauchy problem for the quadratic equation with a memory operator.

    Construction validates the order over every grid argument the scheme
    will touch and the coefficients at every node, so a bad configuration
    fails here rather than mid-solve.
    """

    grid: Grid
    coefficients: CoefficientSet
    u0: float
    order: OrderSpec

    def __post_init__(self) -> None:
        if not math.isfinite(self.u0):
            raise ValueError(f"initial value must be finite, got {self.u0!r}")
        report = validate_on_grid(self.order, self.grid)
        if not report.ok:
            raise OrderBoundError(report.argument, report.value)
        self.coefficients.table(self.grid.nodes)


@dataclass(frozen=True, eq=False)
class SolutionSeries:
    """Solution values at the unknown nodes t_1 ... t_N plus diagnostics."""

    times: np.ndarray
    values: np.ndarray
    newton_iterations: int = 0
    final_residual_norm: float = 0.0

    def __post_init__(self) -> None:
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("solution values must be finite")

    def __len__(self) -> int:
        return len(self.values)
