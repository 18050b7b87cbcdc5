"""Two-action games: everything is a function of z, the share playing action 1.

The herd plays action 1 exactly when z >= 1/2, so population consistency
pins the rational share y to a single value y*(z), and the remaining
best-response condition only involves the sign of the utility gap
h(z) = u(1, z) - u(2, z).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    ProfilePair,
    Tolerances,
    UtilityFunction,
    Verdict,
    check_alpha,
    verify_alpha_rne,
)

log = logging.getLogger(__name__)

ZERO = "zero-of-h"
BOUNDARY_0 = "boundary-0"
BOUNDARY_1 = "boundary-1"
NEW_ALPHA = "new-alpha"
NEW_ONE_MINUS_ALPHA = "new-one-minus-alpha"

# which tag survives when two candidates land on the same z
_TAG_RANK = {BOUNDARY_0: 0, BOUNDARY_1: 0, ZERO: 1, NEW_ALPHA: 2, NEW_ONE_MINUS_ALPHA: 2}

BISECTION_WIDTH = 1e-12
Y_FEASIBILITY = 1e-9


class InfeasibleShare(ValueError):
    """z cannot be produced by any rational share under the given alpha."""


class PlateauOverflow(ValueError):
    """h vanishes on most of [0, 1]; the zero set is not a finite union."""


@dataclass(frozen=True)
class TwoActionGame:
    u1: Callable[[float], float]
    u2: Callable[[float], float]
    name: str = "game"
    analytic_zeros: Optional[tuple] = None
    # closed-form sup_z z*u1 + (1-z)*u2, when known
    social_optimum: Optional[float] = None
    social_optimum_attained: bool = True
    # Lipschitz constant of h, when known
    lipschitz: Optional[float] = None

    def h(self, z: float) -> float:
        return float(self.u1(z)) - float(self.u2(z))

    def utility(self) -> UtilityFunction:
        """The same game as a general two-action :class:`UtilityFunction`."""
        funcs = (self.u1, self.u2)

        def evaluator(a, mu):
            return float(funcs[a - 1](float(mu[0])))

        return UtilityFunction(2, evaluator, kind="catalog", name=self.name)

    @classmethod
    def from_utility(cls, u: UtilityFunction, name: str = "", **kw) -> "TwoActionGame":
        if u.n_actions != 2:
            raise ValueError("utility is not a two-action game")
        return cls(
            u1=lambda z: u(1, (z, 1.0 - z)),
            u2=lambda z: u(2, (z, 1.0 - z)),
            name=name or u.name,
            **kw,
        )


def _evaluate(f, zs: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array, vectorised when ``f`` allows it."""
    try:
        out = np.asarray(f(zs), dtype=float)
        if out.shape == zs.shape:
            return out
    except Exception:
        pass
    return np.array([float(f(float(z))) for z in zs])


def h_eval(game: TwoActionGame, z: float) -> float:
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z={z!r} outside [0, 1]")
    return game.h(z)


def y_star(z: float, alpha: float, tol: float = Y_FEASIBILITY) -> float:
    """Rational share of action 1 forced by consistency at population share z."""
    alpha = check_alpha(alpha)
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z={z!r} outside [0, 1]")
    y = z / alpha if z < 0.5 else 1.0 - (1.0 - z) / alpha
    if y < -tol or y > 1.0 + tol:
        raise InfeasibleShare(f"z={z} needs y={y:.6g} under alpha={alpha}")
    return min(max(y, 0.0), 1.0)


def feasible(z: float, alpha: float) -> bool:
    try:
        y_star(z, alpha)
    except InfeasibleShare:
        return False
    return True


@dataclass(frozen=True)
class HZeroSet:
    points: tuple = ()
    plateaus: tuple = ()  # closed intervals (lo, hi) where h is ~0
    discontinuities: tuple = ()  # grid cells with a sign change but no root


def find_h_zeros(
    game: TwoActionGame, grid_n: int = 1024, tol: Tolerances = DEFAULT_TOL
) -> HZeroSet:
    """Zero set of h on [0, 1].

    Scans ``grid_n + 1`` uniform points. Runs of grid points with
    ``|h| <= tol.h`` become a point (run of one) or a plateau; strict sign
    changes are bisected down to ``BISECTION_WIDTH``. A bracket whose
    bisection does not end on a small ``|h|`` is reported as a
    discontinuity instead of a zero. Tangential zeros strictly between grid
    points are not detected.
    """
    if game.analytic_zeros is not None:
        pts = sorted(float(z) for z in game.analytic_zeros)
        for z in pts:
            if abs(h_eval(game, z)) > tol.h:
                raise ValueError(f"{game.name}: supplied zero {z!r} has h={game.h(z):.3g}")
        return HZeroSet(points=tuple(pts))
    if grid_n < 64:
        raise ValueError("grid_n must be at least 64")

    zs = np.linspace(0.0, 1.0, grid_n + 1)
    hs = _evaluate(game.u1, zs) - _evaluate(game.u2, zs)
    small = np.abs(hs) <= tol.h

    points, plateaus, jumps = [], [], []
    plateau_cells = 0
    k = 0
    while k <= grid_n:
        if small[k]:
            start = k
            while k + 1 <= grid_n and small[k + 1]:
                k += 1
            if k == start:
                points.append(float(zs[k]))
            else:
                plateaus.append((float(zs[start]), float(zs[k])))
                plateau_cells += k - start
        k += 1
    if plateau_cells > grid_n / 2:
        raise PlateauOverflow(
            f"{game.name}: h vanishes on {plateau_cells} of {grid_n} grid cells"
        )

    for k in np.flatnonzero(~small[:-1] & ~small[1:] & (np.sign(hs[:-1]) != np.sign(hs[1:]))):
        lo, hi = float(zs[k]), float(zs[k + 1])
        h_lo = hs[k]
        while hi - lo > BISECTION_WIDTH:
            mid = 0.5 * (lo + hi)
            h_mid = game.h(mid)
            if h_mid == 0.0:
                lo = hi = mid
                break
            if np.sign(h_mid) == np.sign(h_lo):
                lo, h_lo = mid, h_mid
            else:
                hi = mid
        root = min((lo, hi, 0.5 * (lo + hi)), key=lambda z: abs(game.h(z)))
        if abs(game.h(root)) <= tol.h:
            points.append(root)
        else:
            log.debug("%s: sign change without a root in [%g, %g]", game.name, zs[k], zs[k + 1])
            jumps.append((float(zs[k]), float(zs[k + 1])))

    return HZeroSet(
        points=tuple(sorted(points)),
        plateaus=tuple(plateaus),
        discontinuities=tuple(jumps),
    )


@dataclass(frozen=True)
class EquilibriumPoint:
    z: float
    y: float
    tag: str
    margin: float  # slack of the h-condition that certifies the point
    certificate: Optional[Verdict] = field(default=None, compare=False)

    @property
    def verified(self) -> bool:
        return bool(self.certificate)


@dataclass(frozen=True)
class EquilibriumSet:
    game: str
    alpha: float
    points: tuple = ()
    plateaus: tuple = ()  # intervals of equilibria (degenerate games)

    @property
    def zs(self) -> list[float]:
        return [p.z for p in self.points]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points) + len(self.plateaus)

    def contains(self, z: float, tol: float = DEFAULT_TOL.dup) -> bool:
        if any(abs(p.z - z) <= tol for p in self.points):
            return True
        return any(lo - tol <= z <= hi + tol for lo, hi in self.plateaus)

    def is_subset_of(self, other: "EquilibriumSet", tol: float = DEFAULT_TOL.dup) -> bool:
        if not all(other.contains(p.z, tol) for p in self.points):
            return False
        return all(other.contains(lo, tol) and other.contains(hi, tol) for lo, hi in self.plateaus)


def certify(game: TwoActionGame, z: float, alpha: float, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Run the general equilibrium check on the pair induced by (z, y*(z))."""
    y = y_star(z, alpha)
    pair = ProfilePair((z, 1.0 - z), (y, 1.0 - y))
    return verify_alpha_rne(pair, game.utility(), alpha, tol)


def _dedupe(cands: Iterable[tuple[float, str, float]], tol: Tolerances) -> list[tuple[float, str, float]]:
    kept: list[tuple[float, str, float]] = []
    for z, tag, margin in sorted(cands, key=lambda c: (c[0], _TAG_RANK[c[1]])):
        if kept and abs(kept[-1][0] - z) <= tol.dup:
            if _TAG_RANK[tag] < _TAG_RANK[kept[-1][1]]:
                kept[-1] = (z, tag, margin)
            continue
        kept.append((z, tag, margin))
    return kept


def _build(game, alpha, cands, plateaus, tol) -> EquilibriumSet:
    points = []
    for z, tag, margin in _dedupe(cands, tol):
        z = min(max(z, 0.0), 1.0)
        points.append(EquilibriumPoint(z, y_star(z, alpha), tag, margin, certify(game, z, alpha, tol)))
    return EquilibriumSet(game.name, alpha, tuple(points), tuple(plateaus))


def _classical_candidates(game, zeros: HZeroSet, tol):
    cands = [(z, ZERO, -abs(game.h(z))) for z in zeros.points]
    h0, h1 = game.h(0.0), game.h(1.0)
    if h0 <= tol.h:
        cands.append((0.0, BOUNDARY_0, -h0))
    if h1 >= -tol.h:
        cands.append((1.0, BOUNDARY_1, h1))
    return cands


def classical_ne_set(
    game: TwoActionGame,
    grid_n: int = 1024,
    tol: Tolerances = DEFAULT_TOL,
    zeros: Optional[HZeroSet] = None,
) -> EquilibriumSet:
    """Equilibria when every player is rational (alpha = 1)."""
    if zeros is None:
        zeros = find_h_zeros(game, grid_n, tol)
    return _build(game, 1.0, _classical_candidates(game, zeros, tol), zeros.plateaus, tol)


def alpha_rne_set(
    game: TwoActionGame,
    alpha: float,
    grid_n: int = 1024,
    tol: Tolerances = DEFAULT_TOL,
    zeros: Optional[HZeroSet] = None,
) -> EquilibriumSet:
    """Equilibria with an ``alpha`` share of rational players.

    Above one half the set is the classical one. Otherwise classical points
    strictly inside (alpha, 1 - alpha) drop out, 1 - alpha joins when
    h(1 - alpha) <= 0, and alpha joins when alpha < 1/2 and h(alpha) >= 0.
    """
    alpha = check_alpha(alpha)
    if zeros is None:
        zeros = find_h_zeros(game, grid_n, tol)
    cands = _classical_candidates(game, zeros, tol)
    plateaus = list(zeros.plateaus)
    if alpha <= 0.5:
        lo_edge, hi_edge = alpha, 1.0 - alpha
        cands = [c for c in cands if c[0] <= lo_edge + tol.h or c[0] >= hi_edge - tol.h]
        clipped = []
        for lo, hi in plateaus:
            for a, b in ((lo, min(hi, lo_edge)), (max(lo, hi_edge), hi)):
                if b - a > tol.dup:
                    clipped.append((a, b))
        plateaus = clipped
        h_hi = game.h(hi_edge)
        if h_hi <= tol.h:
            cands.append((hi_edge, NEW_ONE_MINUS_ALPHA, -h_hi))
        if alpha < 0.5:
            h_lo = game.h(lo_edge)
            if h_lo >= -tol.h:
                cands.append((lo_edge, NEW_ALPHA, h_lo))
    return _build(game, alpha, cands, plateaus, tol)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    equilibria: EquilibriumSet

    @property
    def zs(self) -> list[float]:
        return self.equilibria.zs

    @property
    def tags(self) -> list[str]:
        return [p.tag for p in self.equilibria.points]


def regime_sweep(
    game: TwoActionGame,
    alphas: Sequence[float],
    grid_n: int = 1024,
    tol: Tolerances = DEFAULT_TOL,
) -> list[SweepRow]:
    """Equilibrium sets across ``alphas``, in the order given."""
    alphas = [check_alpha(a) for a in alphas]
    zeros = find_h_zeros(game, grid_n, tol)
    return [SweepRow(a, alpha_rne_set(game, a, grid_n, tol, zeros=zeros)) for a in alphas]
