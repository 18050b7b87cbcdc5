"""Equilibria of mean-field games with rational and herding players."""

from .core import (
    DEFAULT_TOL,
    DimensionError,
    ProfilePair,
    Tolerances,
    UtilityFunction,
    Verdict,
    majority_action,
    population_measure,
    simplex_grid,
    support,
    verify_alpha_rne,
)
from .oracle import BudgetExceeded, GridSpec, cross_check, enumerate_alpha_rne
from .twoaction import (
    EquilibriumSet,
    TwoActionGame,
    alpha_rne_set,
    classical_ne_set,
    find_h_zeros,
    regime_sweep,
    y_star,
)
from .utilities import expression_utility, tabular_utility
from .welfare import compare, social_optimum, social_optimum_alpha, utility_irrational, utility_rational

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DEFAULT_TOL",
    "DimensionError",
    "EquilibriumSet",
    "GridSpec",
    "ProfilePair",
    "Tolerances",
    "TwoActionGame",
    "UtilityFunction",
    "Verdict",
    "alpha_rne_set",
    "classical_ne_set",
    "compare",
    "cross_check",
    "enumerate_alpha_rne",
    "expression_utility",
    "find_h_zeros",
    "majority_action",
    "population_measure",
    "regime_sweep",
    "simplex_grid",
    "social_optimum",
    "social_optimum_alpha",
    "support",
    "tabular_utility",
    "utility_irrational",
    "utility_rational",
    "verify_alpha_rne",
    "y_star",
]
