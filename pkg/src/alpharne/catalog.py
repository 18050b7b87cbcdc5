"""Preset games with closed-form equilibrium tables.

The tables are written out case by case, independently of the generic
two-action solver, so the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, ProfilePair, Tolerances, UtilityFunction, check_alpha
from .twoaction import EquilibriumPoint, EquilibriumSet, TwoActionGame, certify, y_star

CATALOG = "catalog"


@dataclass(frozen=True)
class RoutingParams:
    gamma: float = 2.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("routing needs gamma > 1")

    @property
    def delta(self) -> float:
        return 1.0 / self.gamma


@dataclass(frozen=True)
class ParticipationParams:
    C: float = 0.5
    P: float = 0.6

    def __post_init__(self):
        if not self.C < 1.0:
            raise ValueError("participation needs C < 1")
        if not self.P > 0.0:
            raise ValueError("participation needs P > 0")

    def thresholds(self, alpha: float) -> tuple[float, float]:
        """(P_1, P_2) separating the low-reward regimes."""
        return alpha * (1.0 - self.C), (1.0 - alpha) * (1.0 - self.C)


@dataclass(frozen=True)
class BandwidthParams:
    pass


def routing_game(p: RoutingParams = RoutingParams()) -> TwoActionGame:
    g = p.gamma
    return TwoActionGame(
        u1=lambda z: -g * np.asarray(z, dtype=float),
        u2=lambda z: -np.ones_like(np.asarray(z, dtype=float)),
        name=f"routing(gamma={g:g})",
        analytic_zeros=(p.delta,),
        social_optimum=p.delta / 4.0 - 1.0,
        lipschitz=g,
    )


def participation_game(p: ParticipationParams = ParticipationParams()) -> TwoActionGame:
    C, P = p.C, p.P

    def u1(z):
        z = float(z)
        return C + (P / z if z > 0 else 0.0)

    z0 = P / (1.0 - C)
    return TwoActionGame(
        u1=u1,
        u2=lambda z: 1.0,
        name=f"participation(C={C:g}, P={P:g})",
        analytic_zeros=(z0,) if z0 <= 1.0 else (),
        # sup over z > 0 of z*C + P + 1 - z, approached as z -> 0+
        social_optimum=1.0 + P,
        social_optimum_attained=False,
    )


def bandwidth_game(p: BandwidthParams = BandwidthParams()) -> TwoActionGame:
    return TwoActionGame(
        u1=lambda z: 1.0 - np.asarray(z, dtype=float),
        u2=lambda z: 0.5 * (1.0 - np.asarray(z, dtype=float)),
        name="bandwidth",
        analytic_zeros=(1.0,),
        social_optimum=0.5,
        lipschitz=0.5,
    )


def example1_utility() -> UtilityFunction:
    """Three actions with u(1, mu) > u(2, mu) > u(3, mu) everywhere."""

    def evaluator(a, mu):
        return (3 - a) + 0.25 * mu[a - 1]

    return UtilityFunction(3, evaluator, kind="catalog", name="example1")


def _table(game: TwoActionGame, alpha: float, zs, tol: Tolerances) -> EquilibriumSet:
    uniq = []
    for z in sorted(zs):
        if not uniq or z - uniq[-1] > tol.dup:
            uniq.append(z)
    points = tuple(
        EquilibriumPoint(z, y_star(z, alpha), CATALOG, float("nan"), certify(game, z, alpha, tol))
        for z in uniq
    )
    return EquilibriumSet(game.name, alpha, points)


def routing_equilibria(
    p: RoutingParams, alpha: float, tol: Tolerances = DEFAULT_TOL
) -> EquilibriumSet:
    alpha = check_alpha(alpha)
    d = p.delta
    if d <= 0.5:
        if alpha <= d:
            zs = [alpha, 1 - alpha]
        elif alpha <= 0.5:
            zs = [d, 1 - alpha]
        else:
            zs = [d]
    else:
        if alpha <= 1 - d:
            zs = [alpha, 1 - alpha]
        elif alpha < 0.5:
            zs = [d, alpha]
        else:
            zs = [d]
    return _table(routing_game(p), alpha, zs, tol)


def participation_equilibria(
    p: ParticipationParams, alpha: float, tol: Tolerances = DEFAULT_TOL
) -> EquilibriumSet:
    """Closed-form case tables for high (P >= 1 - C) and low rewards.

    The low-reward table lists z = 1 among the classical equilibria even
    though h(1) = C + P - 1 < 0 there; it is kept as written so that
    comparisons against the generic solver expose the difference.
    """
    alpha = check_alpha(alpha)
    C, P = p.C, p.P
    if P >= 1 - C:
        n1 = [0.0, 1.0]
        zs = n1 if alpha >= 0.5 else n1 + [alpha]
    else:
        n1 = [0.0, 1.0, P / (1 - C)]
        if alpha > 0.5:
            zs = n1
        elif alpha == 0.5:
            zs = n1 + [0.5] if P < (1 - C) / 2 else n1
        else:
            p1, p2 = p.thresholds(alpha)
            if P <= p1:
                zs = n1 + [1 - alpha]
            elif P < p2:
                zs = [0.0, 1.0, alpha, 1 - alpha]
            else:
                zs = n1 + [alpha]
    return _table(participation_game(p), alpha, zs, tol)


def bandwidth_equilibria(alpha: float, tol: Tolerances = DEFAULT_TOL) -> EquilibriumSet:
    alpha = check_alpha(alpha)
    zs = [1.0] if alpha >= 0.5 else [alpha, 1.0]
    return _table(bandwidth_game(), alpha, zs, tol)


def example1_fixture(alpha: float) -> list[ProfilePair]:
    alpha = check_alpha(alpha)
    if alpha >= 0.5:
        raise ValueError("the example1 fixture assumes herding players are the majority (alpha < 1/2)")
    return [
        ProfilePair((1.0, 0.0, 0.0), (1.0, 0.0, 0.0)),
        ProfilePair((alpha, 1.0 - alpha, 0.0), (1.0, 0.0, 0.0)),
    ]


PRESETS = {
    "routing": (RoutingParams, routing_game),
    "participation": (ParticipationParams, participation_game),
    "bandwidth": (BandwidthParams, bandwidth_game),
}
PRESET_NAMES = (*PRESETS, "example1")


def preset_game(name: str, **params) -> TwoActionGame:
    if name not in PRESETS:
        raise ValueError(f"no two-action preset named {name!r}; choose from {sorted(PRESETS)}")
    cls, build = PRESETS[name]
    return build(cls(**params))


def preset_equilibria(name: str, alpha: float, tol: Tolerances = DEFAULT_TOL, **params) -> EquilibriumSet:
    if name == "routing":
        return routing_equilibria(RoutingParams(**params), alpha, tol)
    if name == "participation":
        return participation_equilibria(ParticipationParams(**params), alpha, tol)
    if name == "bandwidth":
        BandwidthParams(**params)
        return bandwidth_equilibria(alpha, tol)
    raise ValueError(f"no equilibrium table for preset {name!r}")
