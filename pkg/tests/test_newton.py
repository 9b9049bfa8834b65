import math

import numpy as np
import pytest

from memriccati import (
    Constant,
    Grid,
    LinearBackend,
    NewtonSettings,
    NonConvergenceError,
    OrderKind,
    OrderSpec,
    PRESETS,
    Problem,
    SingularJacobianError,
    constant_coefficients,
    solve,
    solve_linear,
    weights,
)


def make_problem(nodes, horizon, coeffs, order=Constant(0.5), u0=0.0):
    return Problem(
        grid=Grid(horizon=horizon, nodes=nodes),
        coefficients=coeffs,
        u0=u0,
        order=OrderSpec(kind=OrderKind.CURRENT_TIME, form=order),
    )


def test_solve_linear_identity():
    rhs = np.array([3.0, -1.0, 0.5])
    for backend in LinearBackend:
        delta = solve_linear(np.eye(3), rhs, backend)
        assert np.allclose(delta, rhs, atol=1e-15)


def test_solve_linear_hand_example():
    jac = np.array([[2.0, 0.0], [-1.0, 3.0]])
    rhs = np.array([4.0, 1.0])
    for backend in LinearBackend:
        delta = solve_linear(jac, rhs, backend)
        assert np.allclose(delta, [2.0, 1.0], atol=1e-12)
        assert np.max(np.abs(jac @ delta - rhs)) <= 1e-9 * np.max(np.abs(rhs))


def test_solve_linear_backends_agree_on_random_systems():
    rng = np.random.default_rng(31)
    for _ in range(50):
        n = rng.integers(2, 12)
        jac = np.tril(rng.uniform(-1.0, 1.0, size=(n, n)))
        jac[np.diag_indices(n)] = rng.uniform(1.0, 3.0, size=n) * rng.choice([-1.0, 1.0], size=n)
        rhs = rng.uniform(-2.0, 2.0, size=n)
        tri = solve_linear(jac, rhs, LinearBackend.TRIANGULAR)
        gj = solve_linear(jac, rhs, LinearBackend.GAUSS_JORDAN)
        scale = np.max(np.abs(tri))
        assert np.max(np.abs(tri - gj)) <= 1e-9 * max(scale, 1.0)


def test_solve_linear_singular_raises():
    jac = np.array([[1.0, 0.0], [5.0, 0.0]])
    for backend in LinearBackend:
        with pytest.raises(SingularJacobianError):
            solve_linear(jac, np.array([1.0, 1.0]), backend)


def test_solve_linear_shape_mismatch():
    with pytest.raises(ValueError):
        solve_linear(np.eye(3), np.array([1.0, 2.0]))


def test_single_node_backward_euler_root():
    # At order ~1 and h = 1/2 the node equation is 2x - x^2 + 1 = 0, whose
    # root nearer the zero initial guess is 1 - sqrt(2).
    problem = make_problem(1, 0.5, constant_coefficients(-1.0, 0.0, 1.0),
                           order=Constant(1.0 - 1e-12))
    for backend in LinearBackend:
        outcome = solve(problem, NewtonSettings(eps=1e-10, linear_backend=backend))
        assert outcome.converged
        assert outcome.solution.values[0] == pytest.approx(1.0 - math.sqrt(2.0),
                                                           abs=1e-6)


def test_degenerate_zero_coefficients():
    problem = make_problem(12, 6.0, constant_coefficients(0.0, 0.0, 0.0), u0=3.0)
    outcome = solve(problem)
    assert outcome.converged
    assert outcome.iterations <= 2
    assert np.all(outcome.solution.values == 3.0)


def test_settings_validation():
    with pytest.raises(ValueError):
        NewtonSettings(eps=0.0)
    with pytest.raises(ValueError):
        NewtonSettings(max_iterations=0)
    assert NewtonSettings(eps=1e-3).seed_residual == pytest.approx(1.0)


def test_nonconvergence_raises():
    preset = PRESETS["example1"]
    problem = preset.problem(OrderKind.CURRENT_TIME, nodes=17)
    with pytest.raises(NonConvergenceError):
        solve(problem, NewtonSettings(eps=1e-13, max_iterations=1))


def test_singular_jacobian_raises():
    base = make_problem(1, 1.0, constant_coefficients(0.0, 0.0, 1.0))
    w1 = weights(base, 1)[0]
    cancelled = make_problem(1, 1.0, constant_coefficients(0.0, -w1, 1.0))
    with pytest.raises(SingularJacobianError):
        solve(cancelled)


def test_backend_equivalence_on_memory_problem():
    preset = PRESETS["example2"]
    problem = preset.problem(OrderKind.LAG_TIME, nodes=65)
    tri = solve(problem, NewtonSettings(linear_backend=LinearBackend.TRIANGULAR))
    gj = solve(problem, NewtonSettings(linear_backend=LinearBackend.GAUSS_JORDAN))
    assert np.max(np.abs(tri.solution.values - gj.solution.values)) <= 1e-8


def test_residual_certificate():
    settings = NewtonSettings()
    for kind in OrderKind:
        problem = PRESETS["example3"].problem(kind, nodes=65)
        outcome = solve(problem, settings)
        assert outcome.last_step_norm <= settings.eps
        assert outcome.solution.final_residual_norm <= 10.0 * settings.eps


def test_deterministic_repeat():
    problem = PRESETS["example2"].problem(OrderKind.LAG_TIME, nodes=65)
    first = solve(problem).solution.values
    second = solve(problem).solution.values
    assert np.array_equal(first, second)
