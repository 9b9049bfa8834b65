"""Grid-refinement error estimation and convergence-order reports.

A row of the report states, for grid size N, the maximum difference between
the solve on N nodes and the solve on its coarser parent (N - 1) / 2,
scaled by 2^p_aprior - 1.  The first level therefore also triggers one
solve on the parent grid below the schedule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, SingularJacobianError
from .newton import NewtonSettings, solve
from .orders import OrderKind
from .problem import Problem, SolutionSeries


class LogBase(enum.Enum):
    """Base of the logarithm in the observed-order formula."""

    TWO = "two"
    STEP_RATIO = "step-ratio"


@dataclass(frozen=True)
class RefinementSchedule:
    """Grid sizes N_0 < N_1 < ... with N_{j+1} = 2 N_j + 1."""

    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise ValueError("schedule needs at least one level")
        first = self.levels[0]
        if first < 3 or first % 2 == 0:
            raise ValueError(
                f"first level must be odd and >= 3 so it has a parent grid, "
                f"got {first}"
            )
        for prev, cur in zip(self.levels, self.levels[1:]):
            if cur != 2 * prev + 1:
                raise ValueError(
                    f"levels must follow N -> 2N + 1, got {prev} -> {cur}"
                )

    @property
    def parent_level(self) -> int:
        """Grid size below the first level, (N_0 - 1) / 2."""
        return (self.levels[0] - 1) // 2

    @classmethod
    def from_base(cls, base: int, count: int) -> "RefinementSchedule":
        levels = [base]
        for _ in range(count - 1):
            levels.append(2 * levels[-1] + 1)
        return cls(tuple(levels))

    @classmethod
    def default(cls) -> "RefinementSchedule":
        return cls.from_base(129, 5)


@dataclass(frozen=True)
class ConvergenceRow:
    nodes: int
    step: float
    eps_alpha: float | None = None
    p_alpha: float | None = None
    eps_gamma: float | None = None
    p_gamma: float | None = None


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]


def runge_error(coarse: SolutionSeries, fine: SolutionSeries,
                p_aprior: int = 1, aligned: bool = False) -> float:
    """Refinement error estimate between a grid and its 2N+1 refinement.

    The plain estimate compares fine node 2k-1 against coarse node k for
    k = 1 ... N, divided by 2^p_aprior - 1.  Those nodes sit at slightly
    different times under h = T / N grids; ``aligned`` instead interpolates
    the fine solution at the coarse node times before differencing.
    """
    n = len(coarse)
    if len(fine) != 2 * n + 1:
        raise ValueError(
            f"fine series must have 2N+1 = {2 * n + 1} values, got {len(fine)}"
        )
    denom = 2.0 ** p_aprior - 1.0
    if aligned:
        interpolated = np.interp(coarse.times, fine.times, fine.values)
        return float(np.max(np.abs(interpolated - coarse.values))) / denom
    k = np.arange(1, n + 1)
    return float(np.max(np.abs(fine.values[2 * k - 2] - coarse.values[k - 1]))) / denom


def observed_order(eps_prev: float, eps_cur: float, h_prev: float, h_cur: float,
                   log_base: LogBase = LogBase.TWO) -> float:
    """Empirical convergence rate from two successive error estimates.

    Defaults to p = ln(eps_prev / eps_cur) / ln 2; with
    ``LogBase.STEP_RATIO`` the logarithm base is the step ratio
    h_prev / h_cur instead (slightly above 2 under the 2N+1 rule).
    """
    for name, v in (("eps_prev", eps_prev), ("eps_cur", eps_cur),
                    ("h_prev", h_prev), ("h_cur", h_cur)):
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError(f"observed_order: {name} must be positive, got {v!r}")
    ratio = eps_prev / eps_cur
    if log_base is LogBase.STEP_RATIO:
        if h_prev <= h_cur:
            raise ValueError("observed_order: h_prev must exceed h_cur")
        return math.log(ratio) / math.log(h_prev / h_cur)
    return math.log(ratio) / math.log(2.0)


def run_study(
    make_problem,
    schedule: RefinementSchedule,
    kinds: tuple[OrderKind, ...] = (OrderKind.CURRENT_TIME, OrderKind.LAG_TIME),
    settings: NewtonSettings | None = None,
    p_aprior: int = 1,
    log_base: LogBase = LogBase.TWO,
    aligned: bool = False,
) -> ConvergenceReport:
    """Solve across the schedule for each operator kind and assemble rows.

    ``make_problem(kind, nodes)`` must return the Problem for one grid size.
    Needs at least two levels so an observed order exists.  Solver errors
    propagate annotated with the grid size that failed.
    """
    if len(schedule.levels) < 2:
        raise ValueError("a study needs at least two schedule levels")
    if not kinds:
        raise ValueError("a study needs at least one operator kind")

    horizon = None
    columns: dict[OrderKind, tuple[list[float], list[float | None]]] = {}
    for kind in kinds:
        solutions: dict[int, SolutionSeries] = {}
        for nodes in (schedule.parent_level, *schedule.levels):
            problem = make_problem(kind, nodes)
            if horizon is None:
                horizon = problem.grid.horizon
            try:
                solutions[nodes] = solve(problem, settings).solution
            except (SingularJacobianError, NonConvergenceError) as exc:
                raise type(exc)(f"level N={nodes} ({kind.value}): {exc}") from exc
        eps_list: list[float] = []
        chain = (schedule.parent_level, *schedule.levels)
        for coarse_n, fine_n in zip(chain, chain[1:]):
            eps_list.append(
                runge_error(solutions[coarse_n], solutions[fine_n], p_aprior, aligned)
            )
        p_list: list[float | None] = [None]
        for j in range(1, len(schedule.levels)):
            p_list.append(observed_order(
                eps_list[j - 1], eps_list[j],
                horizon / schedule.levels[j - 1], horizon / schedule.levels[j],
                log_base,
            ))
        columns[kind] = (eps_list, p_list)

    rows = []
    for j, nodes in enumerate(schedule.levels):
        alpha = columns.get(OrderKind.CURRENT_TIME)
        gamma = columns.get(OrderKind.LAG_TIME)
        rows.append(ConvergenceRow(
            nodes=nodes,
            step=horizon / nodes,
            eps_alpha=alpha[0][j] if alpha else None,
            p_alpha=alpha[1][j] if alpha else None,
            eps_gamma=gamma[0][j] if gamma else None,
            p_gamma=gamma[1][j] if gamma else None,
        ))
    return ConvergenceReport(rows=tuple(rows))
