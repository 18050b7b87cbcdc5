import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alpharne.catalog import example1_utility, routing_game
from alpharne.core import (
    DEFAULT_TOL,
    DimensionError,
    ProfilePair,
    UtilityFunction,
    as_distribution,
    best_response_support,
    check_alpha,
    majority_action,
    population_measure,
    simplex_grid,
    support,
    verify_alpha_rne,
)


def test_tolerance_defaults():
    t = DEFAULT_TOL
    assert (t.tie, t.argmax, t.supp, t.sum, t.h, t.dup) == (1e-12, 1e-10, 1e-12, 1e-12, 1e-10, 1e-9)
    assert t.replace(h=1e-6).h == 1e-6
    with pytest.raises(ValueError):
        t.replace(bogus=1.0)


@pytest.mark.parametrize("alpha", [0.0, -0.1, 1.0000001, float("nan")])
def test_bad_alpha(alpha):
    with pytest.raises(ValueError):
        check_alpha(alpha)


def test_distribution_checks():
    assert np.allclose(as_distribution([0.25, 0.75]), [0.25, 0.75])
    with pytest.raises(ValueError):
        as_distribution([0.5, 0.6])
    with pytest.raises(ValueError):
        as_distribution([1.2, -0.2])
    assert support([0.0, 0.4, 0.6]) == {2, 3}


def test_simplex_grid_counts():
    g = simplex_grid(3, 4)
    assert g.shape == (15, 3)
    assert (g.sum(axis=1) == 4).all()
    assert [tuple(r) for r in g] == sorted(tuple(r) for r in g)


@pytest.mark.parametrize(
    "mu, expected",
    [((0.3, 0.7, 0.0), 2), ((0.5, 0.5), 1), ((0.3, 0.7, 0), 2), ((0.2, 0.4, 0.4), 2)],
)
def test_majority(mu, expected):
    assert majority_action(mu) == expected


def test_majority_near_tie_goes_to_smaller_index():
    assert majority_action((0.5 - 1e-13, 0.5 + 1e-13)) == 1
    assert majority_action((0.5 - 1e-9, 0.5 + 1e-9)) == 2


@pytest.mark.parametrize(
    "mu_r, alpha, m, expected",
    [
        ((1, 0, 0), 0.3, 2, (0.3, 0.7, 0.0)),
        ((1, 0), 1.0, 1, (1.0, 0.0)),
        ((0, 1), 0.4, 1, (0.6, 0.4)),
    ],
)
def test_population_measure(mu_r, alpha, m, expected):
    assert np.allclose(population_measure(mu_r, alpha, m), expected, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(0.0, 1.0), min_size=2, max_size=5).filter(lambda w: sum(w) > 0.1),
    st.floats(0.01, 1.0),
    st.integers(0, 4),
)
def test_population_measure_is_a_distribution(weights, alpha, m):
    mu_r = np.asarray(weights) / sum(weights)
    m = m % len(weights) + 1
    mu = population_measure(mu_r, alpha, m)
    assert abs(mu.sum() - 1.0) < 1e-12
    assert (mu >= 0).all()
    assert mu[m - 1] >= (1 - alpha) - 1e-15


def test_best_response_support():
    assert best_response_support(routing_game().utility(), (0.5, 0.5)) == {1, 2}
    assert best_response_support(example1_utility(), (0.2, 0.3, 0.5)) == {1}
    flat = UtilityFunction(3, lambda a, mu: 4.0)
    assert best_response_support(flat, (1, 0, 0)) == {1, 2, 3}


@pytest.mark.parametrize("mu", [(1, 0, 0), (0.3, 0.7, 0), (0.3, 0, 0.7)])
def test_example1_pairs_verify(mu):
    v = verify_alpha_rne(ProfilePair(mu, (1, 0, 0)), example1_utility(), 0.3)
    assert v.ok and v


def test_verdict_reasons():
    u = example1_utility()
    v = verify_alpha_rne(ProfilePair((0.3, 0.7, 0), (0, 1, 0)), u, 0.3)
    assert not v and v.condition == "best-response"
    v = verify_alpha_rne(ProfilePair((0.3, 0.7, 0), (1, 0, 0)), u, 0.3, majority=1)
    assert not v and v.condition == "majority"
    v = verify_alpha_rne(ProfilePair((0.4, 0.6, 0), (1, 0, 0)), u, 0.3)
    assert not v and v.condition == "consistency"


def test_verify_dimension_mismatch():
    with pytest.raises((DimensionError, ValueError)):
        verify_alpha_rne(ProfilePair((0.5, 0.5), (1, 0)), example1_utility(), 0.3)


def test_marginal_flag_on_near_tie():
    # action 2 beats action 1 by less than ten times the argmax tolerance
    u = UtilityFunction(2, lambda a, mu: 1.0 if a == 1 else 1.0 - 5e-10)
    v = verify_alpha_rne(ProfilePair((1.0, 0.0), (1.0, 0.0)), u, 1.0)
    assert v.ok and v.marginal
