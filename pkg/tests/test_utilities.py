import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alpharne.core import simplex_grid
from alpharne.utilities import ExpressionError, expression_utility, tabular_utility


def test_two_action_expression_matches_routing():
    u = expression_utility("-gamma*z if a == 1 else -1", 2, {"gamma": 2.0})
    assert u(1, (0.25, 0.75)) == pytest.approx(-0.5)
    assert u(2, (0.25, 0.75)) == -1.0
    assert u.kind == "expression"


def test_three_action_expression():
    u = expression_utility("(3 - a) + 0.25*(mu1*ind(a == 1) + mu2*ind(a == 2) + mu3*ind(a == 3))", 3)
    assert u(1, (0.3, 0.7, 0.0)) == pytest.approx(2.075)
    assert u(2, (0.3, 0.7, 0.0)) == pytest.approx(1.175)
    assert u(3, (0.3, 0.7, 0.0)) == pytest.approx(0.0)


def test_functions_and_constants():
    u = expression_utility("max(abs(-2), sqrt(4)) + exp(0) + log(e) - min(pi, 1)", 2)
    assert u(1, (0.5, 0.5)) == pytest.approx(3.0)


@pytest.mark.parametrize(
    "source, n",
    [
        ("__import__('os')", 2),
        ("z.real", 2),
        ("z", 3),
        ("mu4", 3),
        ("mu[0]", 2),
        ("undefined + 1", 2),
        ("'text'", 2),
        ("lambda: 1", 2),
        ("1 +", 2),
    ],
)
def test_rejected_expressions(source, n):
    with pytest.raises(ExpressionError):
        expression_utility(source, n)


def test_tabular_reproduces_grid_values():
    G = 4
    pts = simplex_grid(3, G) / G
    rows = [[float(a + 2 * p[0] - p[2]) for p in pts] for a in range(3)]
    u = tabular_utility(3, G, {1: rows[0], "2": rows[1], 3: rows[2]})
    for p, v in zip(pts, rows[1]):
        assert u(2, p) == pytest.approx(v, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=3, max_size=3).filter(lambda w: sum(w) > 0.05))
def test_tabular_is_exact_for_affine_utilities(w):
    # piecewise-linear interpolation reproduces affine functions exactly
    G = 5
    pts = simplex_grid(3, G) / G
    coef = np.array([[1.0, -2.0, 0.5], [0.0, 3.0, -1.0], [2.0, 2.0, 2.0]])
    u = tabular_utility(3, G, [[float(c @ p) for p in pts] for c in coef])
    mu = np.asarray(w) / sum(w)
    for a in range(3):
        assert u(a + 1, mu) == pytest.approx(float(coef[a] @ mu), abs=1e-9)


def test_tabular_shape_error():
    with pytest.raises(ValueError):
        tabular_utility(2, 4, [[0.0] * 5])


def test_two_action_tabular_is_linear_in_z():
    u = tabular_utility(2, 2, [[0.0, 1.0, 4.0], [1.0, 1.0, 1.0]])
    # grid order is (0,2), (1,1), (2,0): z = 0, 0.5, 1
    assert u(1, (0.25, 0.75)) == pytest.approx(0.5)
    assert u(1, (0.75, 0.25)) == pytest.approx(2.5)
    assert math.isclose(u(2, (0.3, 0.7)), 1.0)
