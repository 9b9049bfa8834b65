"""Euler gamma function on the positive real axis."""

from __future__ import annotations

import math

# Lanczos rational approximation, g = 7 with 9 coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma(x) for real x > 0.

    Relative error stays below 1e-12 on (0.1, 10], which covers every
    argument the memory kernels and quadrature weights can produce
    (fractional orders in (0, 1) only ever need arguments in (0, 2]).
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"gamma: argument must be finite, got {x!r}")
    if x <= 0.0:
        raise ValueError(f"gamma: argument must be positive, got {x!r}")
    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for n, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += coeff / (z + n)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc
