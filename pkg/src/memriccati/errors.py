"""Exception types shared across the solver."""

from __future__ import annotations


class OrderBoundError(ValueError):
    """An evaluated fractional order left the open interval (0, 1).

    Carries the offending argument and value so configuration errors can be
    reported precisely.
    """

    def __init__(self, argument: float, value: float):
        self.argument = argument
        self.value = value
        super().__init__(
            f"order {value!r} at argument {argument!r} falls outside (0, 1)"
        )


class SingularJacobianError(RuntimeError):
    """A Jacobian diagonal entry or elimination pivot fell below tolerance."""


class NonConvergenceError(RuntimeError):
    """Newton iteration exhausted its budget without meeting the tolerance."""
