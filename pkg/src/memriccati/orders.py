"""Variable fractional order of the memory operator.

Two operator variants are supported: the order may follow the current time
``t`` or the time shift ``t - tau`` between the present and a past instant.
Both use the same order families (a constant, or a shifted cosine).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

from .errors import OrderBoundError

#: How far inside (0, 1) clamped order evaluations are kept.
CLAMP_MARGIN = 1e-9


class OrderKind(enum.Enum):
    """Which argument the order function receives."""

    CURRENT_TIME = "alpha"
    """Order follows the current time; one frozen value per target node."""

    LAG_TIME = "gamma"
    """Order follows the shift between the current time and the past."""


class LagSampling(enum.Enum):
    """Argument fed to a lag-driven order for the i-th weight of row k."""

    NODE_TIME = "node-time"
    """(k - i) * h: the absolute time of the older endpoint of the
    sub-interval.  Default; keeps the weight tail smooth even when the
    order function dips toward zero at some shifts."""

    LAG_LEFT = "lag-left"
    """(i - 1) * h: the newer edge of the sub-interval's lag window."""

    LAG_MIDPOINT = "lag-midpoint"
    """(i - 1/2) * h: the middle of the lag window."""


@dataclass(frozen=True)
class Constant:
    """Fixed order, strictly inside (0, 1)."""

    value: float

    def __post_init__(self) -> None:
        if not (0.0 < self.value < 1.0):
            raise ValueError(
                f"constant order must lie strictly in (0, 1), got {self.value!r}"
            )

    def bounds(self) -> tuple[float, float]:
        return (self.value, self.value)

    def __call__(self, arg: float) -> float:
        return self.value


@dataclass(frozen=True)
class Periodic:
    """Order (theta * cos(mu * arg) + 2 * delta) / 2.

    delta shifts the oscillation, theta is its amplitude and mu its
    frequency, so the evaluated order sweeps [(2*delta - theta) / 2,
    (2*delta + theta) / 2].
    """

    delta: float
    theta: float
    mu: float

    def __post_init__(self) -> None:
        for name in ("delta", "theta", "mu"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"periodic order: {name} must be finite")
        if self.theta < 0.0:
            raise ValueError("periodic order: amplitude theta must be >= 0")

    def bounds(self) -> tuple[float, float]:
        return (
            (2.0 * self.delta - self.theta) / 2.0,
            (2.0 * self.delta + self.theta) / 2.0,
        )

    def __call__(self, arg: float) -> float:
        return (self.theta * math.cos(self.mu * arg) + 2.0 * self.delta) / 2.0


OrderForm = Union[Constant, Periodic]


@dataclass(frozen=True)
class OrderSpec:
    """A fractional-order function together with its operator variant.

    With ``clamp`` enabled, evaluations are pulled into
    [CLAMP_MARGIN, 1 - CLAMP_MARGIN]; this admits order families that touch
    0 or 1 at isolated arguments.  Without it, any evaluation outside the
    open unit interval raises :class:`OrderBoundError`.
    """

    kind: OrderKind
    form: OrderForm
    clamp: bool = False
    lag_sampling: LagSampling = LagSampling.NODE_TIME

    def bounds(self) -> tuple[float, float]:
        """Smallest and largest value evaluations can take."""
        lo, hi = self.form.bounds()
        if self.clamp:
            lo = min(max(lo, CLAMP_MARGIN), 1.0 - CLAMP_MARGIN)
            hi = min(max(hi, CLAMP_MARGIN), 1.0 - CLAMP_MARGIN)
        return (lo, hi)

    def _evaluate(self, arg: float) -> float:
        value = self.form(arg)
        if self.clamp:
            value = min(max(value, CLAMP_MARGIN), 1.0 - CLAMP_MARGIN)
        return value


@dataclass(frozen=True)
class OrderValidation:
    """Outcome of checking an order spec over a grid's argument set."""

    ok: bool
    argument: float | None = None
    value: float | None = None


def eval_order(spec: OrderSpec, arg: float) -> float:
    """Evaluate the order at a time (CURRENT_TIME) or a shift (LAG_TIME).

    The result is guaranteed to lie in (0, 1); anything else raises
    :class:`OrderBoundError`.
    """
    if not (math.isfinite(arg) and arg >= 0.0):
        raise ValueError(f"order argument must be finite and >= 0, got {arg!r}")
    value = spec._evaluate(arg)
    if not (0.0 < value < 1.0):
        raise OrderBoundError(arg, value)
    return value


def validate_on_grid(spec: OrderSpec, grid) -> OrderValidation:
    """Check the order at every argument a scheme on ``grid`` will use.

    CURRENT_TIME specs are evaluated at the node times t_0 ... t_N,
    LAG_TIME specs at the shifts 0, h, ..., (N - 1) h.  Returns the first
    violating argument instead of raising.
    """
    h = grid.step
    if spec.kind is OrderKind.CURRENT_TIME:
        args = (m * h for m in range(grid.nodes + 1))
    else:
        args = (m * h for m in range(grid.nodes))
    for arg in args:
        value = spec._evaluate(arg)
        if not (0.0 < value < 1.0):
            return OrderValidation(False, arg, value)
    return OrderValidation(True)
