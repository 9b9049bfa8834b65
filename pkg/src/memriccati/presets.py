"""Named experiment configurations.

Each preset fixes the order family, the coefficient functions and the
initial value; grid size, horizon and solver tolerances stay overridable.
All presets share T = 50 and N = 2000 as the single-run default.

example1      constant order 0.9999 (the near-classical regime)
example2      periodic order sweeping [0.5, 1.0]
example3      periodic order sweeping [0.0, 1.0]
example4      periodic order sweeping [0.0, 0.5]
verification  example1's order with constant coefficients (-1, 0, 1),
              comparable against the classical closed-form limit
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .oracle import TimeFunction, continuous_constant, continuous_ramp
from .orders import Constant, LagSampling, OrderKind, OrderSpec, Periodic
from .problem import (
    CoefficientSet,
    Grid,
    Problem,
    constant_coefficients,
    ramp_coefficients,
)

DEFAULT_HORIZON = 50.0
DEFAULT_SOLVE_NODES = 2000


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    form_parameters: tuple      # ("constant", value) or ("periodic", delta, theta, mu)
    ramp: bool                  # ramp coefficients, else the constant triple below
    const_coeffs: tuple[float, float, float] | None = None
    u0: float = 0.0
    horizon: float = DEFAULT_HORIZON
    solve_nodes: int = DEFAULT_SOLVE_NODES
    clamp: bool = True          # named presets may touch 0/1 at isolated points;
                                # ad-hoc configurations should validate strictly

    def order_form(self, step_scale: float | None = None):
        """The order function; ``step_scale`` multiplies the frequency by the
        grid step (the alternate reading of the periodic family, offered for
        sensitivity checks)."""
        if self.form_parameters[0] == "constant":
            return Constant(self.form_parameters[1])
        _, delta, theta, mu = self.form_parameters
        if step_scale is not None:
            mu = mu * step_scale
        return Periodic(delta, theta, mu)

    def order_spec(self, kind: OrderKind,
                   sampling: LagSampling = LagSampling.NODE_TIME,
                   step_scale: float | None = None) -> OrderSpec:
        return OrderSpec(kind=kind, form=self.order_form(step_scale),
                         clamp=self.clamp, lag_sampling=sampling)

    def coefficients(self, nodes: int) -> CoefficientSet:
        if self.ramp:
            return ramp_coefficients(nodes)
        return constant_coefficients(*self.const_coeffs)

    def classic_coefficients(self) -> tuple[TimeFunction, TimeFunction, TimeFunction]:
        """Continuous-time coefficients for the classical-limit integrator."""
        if self.ramp:
            return continuous_ramp(self.horizon)
        return continuous_constant(*self.const_coeffs)

    def problem(self, kind: OrderKind, nodes: int | None = None,
                horizon: float | None = None, u0: float | None = None,
                sampling: LagSampling = LagSampling.NODE_TIME,
                literal_step_argument: bool = False) -> Problem:
        nodes = self.solve_nodes if nodes is None else nodes
        horizon = self.horizon if horizon is None else horizon
        grid = Grid(horizon=horizon, nodes=nodes)
        step_scale = grid.step if literal_step_argument else None
        return Problem(
            grid=grid,
            coefficients=self.coefficients(nodes),
            u0=self.u0 if u0 is None else u0,
            order=self.order_spec(kind, sampling, step_scale),
        )


PRESETS: dict[str, ExperimentPreset] = {
    "example1": ExperimentPreset(
        name="example1",
        form_parameters=("constant", 0.9999),
        ramp=True,
    ),
    "example2": ExperimentPreset(
        name="example2",
        form_parameters=("periodic", 0.75, 0.5, math.pi / 2),
        ramp=True,
    ),
    # amplitude 1.0 so the order sweeps the full unit interval (0, 1)
    "example3": ExperimentPreset(
        name="example3",
        form_parameters=("periodic", 0.5, 1.0, math.pi / 2),
        ramp=True,
    ),
    "example4": ExperimentPreset(
        name="example4",
        form_parameters=("periodic", 0.25, 0.5, math.pi / 2),
        ramp=True,
    ),
    "verification": ExperimentPreset(
        name="verification",
        form_parameters=("constant", 0.9999),
        ramp=False,
        const_coeffs=(-1.0, 0.0, 1.0),
    ),
}
