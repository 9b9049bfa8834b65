import math

import numpy as np
import pytest

from memriccati import (
    Constant,
    Grid,
    LagSampling,
    OrderKind,
    OrderSpec,
    Periodic,
    Problem,
    build_weight_table,
    constant_coefficients,
    gamma,
    jacobian_entry,
    jacobian_matrix,
    ramp_coefficients,
    residual,
    residual_vector,
    weights,
)

ZERO = constant_coefficients(0.0, 0.0, 0.0)


def make_problem(order_form, horizon, nodes, coeffs=None, u0=0.0,
                 kind=OrderKind.CURRENT_TIME,
                 sampling=LagSampling.NODE_TIME, clamp=False):
    return Problem(
        grid=Grid(horizon=horizon, nodes=nodes),
        coefficients=coeffs if coeffs is not None else ZERO,
        u0=u0,
        order=OrderSpec(kind=kind, form=order_form, clamp=clamp,
                        lag_sampling=sampling),
    )


def kernel_quadrature_weight(order, h, i, panels=400):
    """Independent first-order weight: integrate the kernel against the slope
    of a piecewise-linear reconstruction over the i-th sub-interval.

    The lag-zero panel is handled with the substitution s = h * y^4 so the
    integrable singularity disappears; interior panels use plain
    Gauss-Legendre.
    """
    nodes_y, weights_y = np.polynomial.legendre.leggauss(panels)
    if i == 1:
        # int_0^h s^-g ds = 4 h^(1-g) * int_0^1 y^(3-4g) dy
        y = 0.5 * (nodes_y + 1.0)
        wq = 0.5 * weights_y
        integral = 4.0 * h ** (1.0 - order) * np.sum(wq * y ** (3.0 - 4.0 * order))
    else:
        lo, hi = (i - 1) * h, i * h
        s = 0.5 * (hi - lo) * nodes_y + 0.5 * (hi + lo)
        wq = 0.5 * (hi - lo) * weights_y
        integral = np.sum(wq * s ** (-order))
    return integral / (h * gamma(1.0 - order))


def test_backward_euler_limit_weights():
    problem = make_problem(Constant(1.0 - 1e-12), horizon=3.0, nodes=6)
    w = weights(problem, 6)
    inv_h = 1.0 / problem.grid.step
    assert abs(w[0] - inv_h) <= 1e-9 * inv_h
    assert np.all(np.abs(w[1:]) <= 1e-9 * inv_h)


def test_unit_step_half_order_weights():
    # closed forms at order 1/2, unit step: 1 / Gamma(3/2) and
    # (sqrt(2) - 1) / Gamma(3/2); both re-derived by the quadrature oracle
    problem = make_problem(Constant(0.5), horizon=4.0, nodes=4)
    w = weights(problem, 2)
    assert w[0] == pytest.approx(1.1283791670955126, rel=1e-12)
    assert w[1] == pytest.approx(0.4673899545102179, rel=1e-12)


@pytest.mark.parametrize("order", [0.3, 0.5, 0.6])
@pytest.mark.parametrize("h", [1.0, 0.5])
def test_weights_match_kernel_quadrature(order, h):
    nodes = 5
    problem = make_problem(Constant(order), horizon=h * nodes, nodes=nodes)
    w = weights(problem, nodes)
    for i in range(1, nodes + 1):
        oracle = kernel_quadrature_weight(order, h, i)
        assert w[i - 1] == pytest.approx(oracle, rel=1e-8)


def test_weight_rows_positive_and_nonincreasing_for_frozen_order():
    problem = make_problem(Periodic(0.5, 0.3, 1.1), horizon=10.0, nodes=40,
                           kind=OrderKind.CURRENT_TIME)
    table = build_weight_table(problem)
    for k in (1, 7, 40):
        row = table.row(k)
        assert np.all(row > 0.0)
        assert np.all(np.diff(row) <= 0.0)


def test_constant_order_rows_identical_across_variants():
    kwargs = dict(horizon=10.0, nodes=24)
    base = build_weight_table(make_problem(Constant(0.42), **kwargs)).rows
    for kind, sampling in (
        (OrderKind.LAG_TIME, LagSampling.NODE_TIME),
        (OrderKind.LAG_TIME, LagSampling.LAG_LEFT),
    ):
        other = build_weight_table(
            make_problem(Constant(0.42), kind=kind, sampling=sampling, **kwargs)
        ).rows
        for a, b in zip(base, other):
            assert np.array_equal(a, b)


def test_weights_agree_with_table_rows():
    problem = make_problem(Periodic(0.5, 0.4, 0.9), horizon=8.0, nodes=16,
                           kind=OrderKind.LAG_TIME)
    table = build_weight_table(problem)
    for k in range(1, 17):
        assert np.array_equal(weights(problem, k), table.row(k))


def test_lag_samplings_differ_for_variable_order():
    kwargs = dict(horizon=8.0, nodes=16, kind=OrderKind.LAG_TIME)
    form = Periodic(0.5, 0.4, 0.9)
    rows = {
        sampling: build_weight_table(
            make_problem(form, sampling=sampling, **kwargs)).row(16)
        for sampling in LagSampling
    }
    assert not np.allclose(rows[LagSampling.NODE_TIME], rows[LagSampling.LAG_LEFT])
    assert not np.allclose(rows[LagSampling.LAG_LEFT], rows[LagSampling.LAG_MIDPOINT])


def test_weights_index_bounds():
    problem = make_problem(Constant(0.5), horizon=1.0, nodes=4)
    with pytest.raises(ValueError):
        weights(problem, 0)
    with pytest.raises(ValueError):
        weights(problem, 5)


def test_residual_backward_euler_limit_sample():
    problem = make_problem(Constant(1.0 - 1e-12), horizon=2.0, nodes=4,
                           coeffs=constant_coefficients(-1.0, 0.0, 1.0))
    for x in (-0.7, 0.0, 0.4):
        u = np.array([x, 0.0, 0.0, 0.0])
        f1 = residual(problem, u, 1)
        assert f1 == pytest.approx(2.0 * x - x * x + 1.0, abs=1e-8)


def test_residual_vanishes_on_constant_extension():
    problem = make_problem(Constant(0.5), horizon=2.0, nodes=8, u0=3.0)
    u = np.full(8, 3.0)
    assert np.all(residual_vector(problem, u) == 0.0)


def test_residual_ramp_constant_term():
    problem = make_problem(Constant(0.5), horizon=2.0, nodes=4,
                           coeffs=ramp_coefficients(4))
    u = np.zeros(4)
    f = residual_vector(problem, u)
    assert np.allclose(f, [0.25, 0.5, 0.75, 1.0], atol=0.0)


def test_residual_backward_euler_limit_random():
    rng = np.random.default_rng(17)
    problem = make_problem(Constant(1.0 - 1e-12), horizon=5.0, nodes=10,
                           coeffs=constant_coefficients(0.7, -0.3, 0.2),
                           u0=0.5)
    h = problem.grid.step
    u = rng.uniform(-1.0, 1.0, size=10)
    f = residual_vector(problem, u)
    u_prev = np.concatenate([[0.5], u[:-1]])
    euler = (u - u_prev) / h + 0.7 * u ** 2 - 0.3 * u + 0.2
    assert np.all(np.abs(f - euler) <= 1e-6 * np.maximum(1.0, np.abs(f)))


def test_jacobian_strictly_lower_triangular():
    problem = make_problem(Constant(0.5), horizon=2.0, nodes=6,
                           coeffs=ramp_coefficients(6))
    u = np.linspace(-0.5, 0.5, 6)
    for n in range(1, 7):
        for m in range(n + 1, 7):
            assert jacobian_entry(problem, u, n, m) == 0.0


def test_jacobian_diagonal_backward_euler_limit():
    problem = make_problem(Constant(1.0 - 1e-12), horizon=2.0, nodes=4,
                           coeffs=constant_coefficients(-1.0, 0.0, 1.0))
    u = np.zeros(4)
    assert jacobian_entry(problem, u, 1, 1) == pytest.approx(2.0, abs=1e-8)


def central_difference(problem, u, n, m, step=1e-6):
    up = u.copy()
    um = u.copy()
    up[m - 1] += step
    um[m - 1] -= step
    return (residual(problem, up, n) - residual(problem, um, n)) / (2.0 * step)


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(23)
    problem = make_problem(Periodic(0.5, 0.35, 1.3), horizon=3.0, nodes=6,
                           coeffs=constant_coefficients(-0.8, 0.4, 0.6),
                           kind=OrderKind.LAG_TIME, u0=0.2)
    u = rng.uniform(-1.0, 1.0, size=6)
    for n in range(1, 7):
        for m in range(1, n + 1):
            analytic = jacobian_entry(problem, u, n, m)
            numeric = central_difference(problem, u, n, m)
            assert abs(analytic - numeric) <= 1e-6 * max(1.0, abs(analytic))


def test_jacobian_matrix_matches_entries():
    problem = make_problem(Constant(0.6), horizon=2.0, nodes=5,
                           coeffs=ramp_coefficients(5), u0=-0.1)
    u = np.linspace(0.0, -1.0, 5)
    dense = jacobian_matrix(problem, u)
    for n in range(1, 6):
        for m in range(1, 6):
            assert dense[n - 1, m - 1] == jacobian_entry(problem, u, n, m)
