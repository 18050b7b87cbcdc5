"""Brute-force search for equilibria on a grid of rational profiles.

Makes no use of the two-action theory: for every rational distribution on
the simplex grid and every candidate herd action it builds the population
distribution, checks that the herd action really is the majority, and
checks the best-response condition. It is the reference the closed-form
solver is compared with, and the only solver for three or more actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    ProfilePair,
    Tolerances,
    UtilityFunction,
    check_alpha,
    majority_action,
    population_measure,
    simplex_grid,
    support,
)
from .twoaction import EquilibriumSet, TwoActionGame, alpha_rne_set


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    resolution: int = 100
    budget: int = 2_000_000  # utility-vector evaluations

    def __post_init__(self):
        if self.resolution < 10:
            raise ValueError("grid resolution must be at least 10")


@dataclass(frozen=True)
class OracleHit:
    pair: ProfilePair
    majority: int
    violation: float  # how far the best-response condition is from exact
    bound: float  # acceptance bound granted at this grid point
    counts: tuple  # rational profile as integer grid counts


@dataclass(frozen=True)
class OracleCluster:
    majority: int
    hits: tuple

    @property
    def representative(self) -> OracleHit:
        return min(self.hits, key=lambda h: (h.violation, h.counts))

    @property
    def lower(self) -> np.ndarray:
        return np.min([h.pair.mu for h in self.hits], axis=0)

    @property
    def upper(self) -> np.ndarray:
        return np.max([h.pair.mu for h in self.hits], axis=0)

    def distance_to(self, mu) -> float:
        """Sup-norm distance from ``mu`` to the cluster's bounding box."""
        mu = np.asarray(mu, dtype=float)
        gap = np.maximum(self.lower - mu, 0.0) + np.maximum(mu - self.upper, 0.0)
        return float(gap.max())


def _neighbours(counts: np.ndarray, index: dict) -> list[list[int]]:
    n = counts.shape[1]
    out = []
    for row in counts:
        nb = []
        for a in range(n):
            if row[a] == 0:
                continue
            for b in range(n):
                if b == a:
                    continue
                moved = row.copy()
                moved[a] -= 1
                moved[b] += 1
                j = index.get(tuple(moved.tolist()))
                if j is not None:
                    nb.append(j)
        out.append(nb)
    return out


def _crossing_violation(v0: np.ndarray, v1: np.ndarray, S, t_max: float = 0.5, closed: bool = True) -> float:
    """Smallest best-response violation on the segment from grid point 0
    towards a neighbour, for parameters in [0, t_max], utilities
    interpolated linearly. With ``closed=False`` the end t_max is excluded.

    The violation max_b u_b - min_{a in S} u_a is a maximum of lines in the
    segment parameter, hence convex; its minimum sits at an end or where two
    lines cross.
    """
    d0 = (v0[:, None] - v0[None, S]).ravel()
    d1 = (v1[:, None] - v1[None, S]).ravel()
    slope = d1 - d0
    num = d0[:, None] - d0[None, :]
    den = slope[None, :] - slope[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = num / den
    cross = cross[np.isfinite(cross) & (cross > 0.0) & ((cross <= t_max) if closed else (cross < t_max))]
    ts = np.concatenate(([0.0, t_max] if closed else [0.0], cross))
    return float(np.min(np.max(d0[None, :] + ts[:, None] * slope[None, :], axis=1)))


def _majority_reach(mu0: np.ndarray, mu1: np.ndarray, m: int, tol: Tolerances) -> tuple[float, bool]:
    """How far along the segment mu0 -> mu1 action ``m`` stays the majority.

    Returns (t, closed): closed is False when the limit comes from a tie
    that the smaller-index rule resolves against ``m``.
    """
    t_max, closed = 1.0, True
    k = m - 1
    for b in range(mu0.size):
        if b == k:
            continue
        g0 = mu0[k] - mu0[b]
        g1 = mu1[k] - mu1[b]
        if g1 >= g0 or g1 >= (tol.tie if b < k else -tol.tie):
            continue
        t = g0 / (g0 - g1)
        if t < t_max or (t == t_max and b < k):
            t_max, closed = t, b > k
    return t_max, closed


def enumerate_alpha_rne(
    u: UtilityFunction,
    alpha: float,
    grid: GridSpec = GridSpec(),
    tol: Tolerances = DEFAULT_TOL,
    n_actions: Optional[int] = None,
) -> list[OracleCluster]:
    """Grid equilibria of ``u`` grouped into connected clusters.

    A grid point is accepted when the herd action is the majority and the
    best-response condition holds within ``tol.argmax``, either at the grid
    point itself or, with utilities interpolated linearly, somewhere on the
    segment towards an adjacent grid point. The segment is cut at half a
    step when the neighbour is itself a candidate (it owns the other half),
    and otherwise where the herd action stops being the majority. The
    second clause catches indifference points between grid points,
    including those sitting on a majority tie.
    Clusters come out ordered by herd action, then by first grid index.
    """
    alpha = check_alpha(alpha)
    n = u.n_actions
    if n_actions is not None and n_actions != n:
        raise ValueError(f"utility has {n} actions, expected {n_actions}")
    G = grid.resolution
    work = n * comb(G + n - 1, n - 1)
    if work > grid.budget:
        raise BudgetExceeded(f"{work} evaluations needed, budget is {grid.budget}")

    counts = simplex_grid(n, G)
    profiles = counts / G
    index = {tuple(row.tolist()): i for i, row in enumerate(counts)}
    neighbours = _neighbours(counts, index)
    supports = [sorted(a - 1 for a in support(p, tol)) for p in profiles]

    clusters = []
    for m in range(1, n + 1):
        mus = [population_measure(p, alpha, m) for p in profiles]
        vals = np.array([u.values(mu) for mu in mus])
        consistent = np.array([majority_action(mu, tol) == m for mu in mus])
        top = vals.max(axis=1)
        accepted = {}
        for i in np.flatnonzero(consistent):
            S = supports[i]
            violation = float(top[i] - vals[i, S].min())
            bound = tol.argmax
            if violation > bound:
                reach = np.inf
                for j in neighbours[i]:
                    if consistent[j]:
                        t_max, closed = 0.5, True
                    else:
                        t_max, closed = _majority_reach(mus[i], mus[j], m, tol)
                    reach = min(reach, _crossing_violation(vals[i], vals[j], S, t_max, closed))
                if reach <= tol.argmax:
                    bound = violation
            if violation <= bound:
                accepted[i] = OracleHit(
                    ProfilePair(tuple(mus[i]), tuple(profiles[i])),
                    m,
                    violation,
                    bound,
                    tuple(int(c) for c in counts[i]),
                )
        seen = set()
        for i in sorted(accepted):
            if i in seen:
                continue
            stack, members = [i], []
            seen.add(i)
            while stack:
                k = stack.pop()
                members.append(k)
                for j in neighbours[k]:
                    if j in accepted and j not in seen:
                        seen.add(j)
                        stack.append(j)
            clusters.append(OracleCluster(m, tuple(accepted[k] for k in sorted(members))))
    return clusters


@dataclass(frozen=True)
class CrossCheckReport:
    game: str
    alpha: float
    resolution: int
    matched: tuple  # (theory z, distance to nearest cluster)
    missed: tuple  # theory z with no cluster nearby
    spurious: tuple  # representative z of clusters with no theory point nearby

    @property
    def ok(self) -> bool:
        return not self.missed and not self.spurious

    def summary(self) -> str:
        status = "all matched" if self.ok else "MISMATCH"
        return (
            f"{self.game} alpha={self.alpha:g} G={self.resolution}: {status} "
            f"(matched={len(self.matched)}, missed={list(self.missed)}, "
            f"spurious={list(self.spurious)})"
        )


def cross_check(
    game: TwoActionGame,
    alpha: float,
    grid: GridSpec = GridSpec(400),
    tol: Tolerances = DEFAULT_TOL,
    theory: Optional[EquilibriumSet] = None,
    grid_n: int = 1024,
) -> CrossCheckReport:
    """Compare the grid search with the closed-form equilibrium set.

    Distances are measured in z; anything within 2/G counts as a match.
    """
    alpha = check_alpha(alpha)
    if theory is None:
        theory = alpha_rne_set(game, alpha, grid_n, tol)
    clusters = enumerate_alpha_rne(game.utility(), alpha, grid, tol)
    reach = 2.0 / grid.resolution
    spans = [(float(c.lower[0]), float(c.upper[0])) for c in clusters]

    def gap(a, b):
        return max(a[0] - b[1], b[0] - a[1], 0.0)

    def label(t):
        return t[0] if t[0] == t[1] else t

    targets = [(p.z, p.z) for p in theory.points] + [tuple(iv) for iv in theory.plateaus]
    matched, missed = [], []
    for t in targets:
        d = min((gap(t, s) for s in spans), default=np.inf)
        if d <= reach:
            matched.append((label(t), d))
        else:
            missed.append(label(t))
    spurious = [
        float(c.representative.pair.mu[0])
        for c, s in zip(clusters, spans)
        if min((gap(t, s) for t in targets), default=np.inf) > reach
    ]
    return CrossCheckReport(
        game.name,
        alpha,
        grid.resolution,
        tuple(matched),
        tuple(missed),
        tuple(spurious),
    )
