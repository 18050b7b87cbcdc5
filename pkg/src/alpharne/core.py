"""Finite-action model: distributions, the herding map, population consistency
and the equilibrium check for a mixed rational/herding population.

Actions are numbered from 1 in every public function, matching the way
games are written down; arrays are indexed from 0 internally.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Numerical bands used wherever an exact (in)equality is required."""

    tie: float = 1e-12  # majority ties
    argmax: float = 1e-10  # best-response ties
    supp: float = 1e-12  # mass counted as "in the support"
    sum: float = 1e-12  # distribution normalisation / consistency
    h: float = 1e-10  # zeros and sign conditions of the utility gap
    dup: float = 1e-9  # two equilibria closer than this are the same

    def replace(self, **changes) -> "Tolerances":
        unknown = set(changes) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ValueError(f"unknown tolerance(s): {sorted(unknown)}")
        return dataclasses.replace(self, **changes)


DEFAULT_TOL = Tolerances()


class DimensionError(ValueError):
    pass


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    return alpha


def as_distribution(weights: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("a distribution needs at least two actions")
    if np.any(w < -tol.sum) or np.any(w > 1.0 + tol.sum):
        raise ValueError(f"weights outside [0, 1]: {w}")
    if abs(w.sum() - 1.0) > tol.sum:
        raise ValueError(f"weights sum to {w.sum()!r}, not 1")
    return w


def support(mu: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> frozenset[int]:
    """Actions carrying more than ``tol.supp`` mass."""
    return frozenset(int(i) + 1 for i in np.flatnonzero(np.asarray(mu) > tol.supp))


class UtilityFunction:
    """Utility u(a, mu) shared by all players.

    ``evaluator(a, mu)`` receives a 1-based action and the population
    distribution as a float array. It must be deterministic and free of side
    effects; the solvers call it many times and from any order.
    """

    def __init__(
        self,
        n_actions: int,
        evaluator: Callable[[int, np.ndarray], float],
        kind: str = "expression",
        name: str = "",
    ):
        if int(n_actions) < 2:
            raise ValueError("need at least two actions")
        if kind not in ("catalog", "tabular", "expression"):
            raise ValueError(f"unknown utility kind {kind!r}")
        self.n_actions = int(n_actions)
        self.evaluator = evaluator
        self.kind = kind
        self.name = name

    def __call__(self, action: int, mu: Sequence[float]) -> float:
        if not 1 <= action <= self.n_actions:
            raise DimensionError(f"action {action} not in 1..{self.n_actions}")
        return float(self.evaluator(action, np.asarray(mu, dtype=float)))

    def values(self, mu: Sequence[float]) -> np.ndarray:
        mu = np.asarray(mu, dtype=float)
        if mu.size != self.n_actions:
            raise DimensionError(f"distribution has {mu.size} entries, utility expects {self.n_actions}")
        return np.array([float(self.evaluator(a, mu)) for a in range(1, self.n_actions + 1)])

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<UtilityFunction{label} kind={self.kind} actions={self.n_actions}>"


@dataclass(frozen=True)
class ProfilePair:
    """Whole-population distribution ``mu`` and rational-only ``mu_r``."""

    mu: tuple
    mu_r: tuple

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        object.__setattr__(self, "mu_r", tuple(float(x) for x in self.mu_r))
        if len(self.mu) != len(self.mu_r):
            raise DimensionError("mu and mu_r are over different action sets")

    @property
    def n_actions(self) -> int:
        return len(self.mu)


def simplex_grid(n_actions: int, resolution: int) -> np.ndarray:
    """Integer count vectors of length ``n_actions`` summing to ``resolution``.

    Rows come in lexicographic order; divide by ``resolution`` to get the
    distributions on the grid.
    """
    if n_actions < 1 or resolution < 0:
        raise ValueError("bad grid shape")

    def rec(k, total):
        if k == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(k - 1, total - first):
                yield (first,) + rest

    return np.array(list(rec(n_actions, resolution)), dtype=np.int64)


def majority_action(mu: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> int:
    """Most played action; near-ties go to the smallest index."""
    mu = np.asarray(mu, dtype=float)
    top = mu.max()
    return int(np.flatnonzero(mu >= top - tol.tie)[0]) + 1


def population_measure(mu_r: Sequence[float], alpha: float, majority: int) -> np.ndarray:
    """Mix the rational distribution with the herd sitting on ``majority``."""
    mu_r = np.asarray(mu_r, dtype=float)
    if not 1 <= majority <= mu_r.size:
        raise DimensionError(f"majority action {majority} not in 1..{mu_r.size}")
    mu = alpha * mu_r
    mu[majority - 1] += 1.0 - alpha
    return mu


def best_response_support(
    u: UtilityFunction, mu: Sequence[float], tol: Tolerances = DEFAULT_TOL
) -> frozenset[int]:
    vals = u.values(mu)
    return frozenset(int(i) + 1 for i in np.flatnonzero(vals >= vals.max() - tol.argmax))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    condition: Optional[str] = None  # "best-response", "consistency" or "majority"
    reason: str = ""
    support_violation: float = 0.0
    consistency_error: float = 0.0
    margin: float = float("inf")
    marginal: bool = False
    majority: int = 0

    def __bool__(self):
        return self.ok


def verify_alpha_rne(
    pair: ProfilePair,
    u: UtilityFunction,
    alpha: float,
    tol: Tolerances = DEFAULT_TOL,
    majority: Optional[int] = None,
) -> Verdict:
    """Check the three equilibrium conditions for ``pair``.

    ``majority`` is the herd's action the caller claims was used to build
    ``mu``; when omitted it is taken to be the majority of ``mu`` itself.
    """
    alpha = check_alpha(alpha)
    if pair.n_actions != u.n_actions:
        raise DimensionError(
            f"profile has {pair.n_actions} actions, utility has {u.n_actions}"
        )
    mu = as_distribution(pair.mu, tol)
    mu_r = as_distribution(pair.mu_r, tol)

    vals = u.values(mu)
    top = vals.max()
    supp_r = support(mu_r, tol)
    gaps = {a: top - vals[a - 1] for a in supp_r}
    violation = max(gaps.values()) if gaps else 0.0
    best_in = max((vals[a - 1] for a in supp_r), default=top)
    outside = [best_in - vals[a - 1] for a in range(1, u.n_actions + 1) if a not in supp_r]
    margin = (min(outside) if outside else float("inf")) - max(violation, 0.0)
    m = majority_action(mu, tol)
    consistency = float(np.max(np.abs(mu - population_measure(mu_r, alpha, m))))
    common = dict(
        support_violation=float(violation),
        consistency_error=consistency,
        margin=float(margin),
        marginal=bool(margin < 10 * tol.argmax),
        majority=m,
    )

    if violation > tol.argmax:
        worst = max(gaps, key=gaps.get)
        return Verdict(
            False,
            "best-response",
            f"action {worst} is played by rationals but trails the best reply by {violation:.3g}",
            **common,
        )
    if majority is not None and majority != m:
        return Verdict(
            False,
            "majority",
            f"herd placed on action {majority} but the majority of mu is action {m}",
            **common,
        )
    if consistency > tol.sum:
        return Verdict(
            False,
            "consistency",
            f"mu differs from alpha*mu_r + herd mass by {consistency:.3g}",
            **common,
        )
    return Verdict(True, None, "ok", **common)
