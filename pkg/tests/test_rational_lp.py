from fractions import Fraction

import pytest

from rate_regions.utils.rational_lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    farkas_certificate,
    find_feasible_point,
    maximize,
    rank,
    solve_linear_system,
)

F = Fraction


def test_maximize_box():
    result = maximize([1, 1], [[1, 0], [0, 1]], [2, 3], nonnegative=[True, True])
    assert result.status == OPTIMAL
    assert result.value == 5
    assert result.point == (2, 3)


def test_maximize_free_variable():
    result = maximize([-1], [[-1]], [2])
    assert result.status == OPTIMAL
    assert result.point == (-2,)
    assert result.value == 2


def test_maximize_with_equality():
    result = maximize([1, 0], [[0, -1]], [-1], [[1, 1]], [4])
    assert result.status == OPTIMAL
    assert result.point == (3, 1)


def test_maximize_exact_fractions():
    result = maximize([1, 1], [[3, 1], [1, 3]], [2, 2], nonnegative=[True, True])
    assert result.value == 1
    assert result.point == (F(1, 2), F(1, 2))


def test_unbounded_and_infeasible():
    assert maximize([1], nonnegative=[True]).status == UNBOUNDED
    assert maximize([0], [[1]], [-1], nonnegative=[True]).status == INFEASIBLE
    assert not find_feasible_point([[1], [-1]], [1, -2]).feasible


def test_maximize_checks_shapes():
    with pytest.raises(ValueError):
        maximize([1, 1], [[1]], [1])
    with pytest.raises(ValueError):
        maximize([1], [[1]], [1, 2])


def test_degenerate_vertex_terminates():
    # three constraints through the optimum (1, 1) in the plane
    A = [[1, 0], [0, 1], [1, 1], [1, -1], [-1, 1]]
    b = [1, 1, 2, 0, 0]
    result = maximize([1, 1], A, b, nonnegative=[True, True])
    assert result.status == OPTIMAL
    assert result.value == 2


def test_farkas_certificate():
    y, z = farkas_certificate([[1], [-1]], [1, -2])
    assert y == (1, 1)
    assert z == ()
    assert farkas_certificate([[1], [-1]], [2, -1]) is None


def test_farkas_certificate_with_equality():
    y, z = farkas_certificate([[1, 0]], [0], [[1, 0]], [1])
    combined = y[0] * 0 + z[0] * 1
    assert combined == -1
    assert y[0] * 1 + z[0] * 1 == 0
    assert y[0] >= 0


def test_linear_algebra_helpers():
    assert rank([[1, 2], [2, 4]], 2) == 1
    assert solve_linear_system([[1, 1], [1, -1]], [3, 1], 2) == (2, 1)
    assert solve_linear_system([[1, 1]], [3], 2) is None
    assert solve_linear_system([[1, 1], [1, 1]], [1, 2], 2) is None
