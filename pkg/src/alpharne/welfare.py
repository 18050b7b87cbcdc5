"""Utilities of rational and herding players at equilibrium, and how they
compare with the all-rational benchmark."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import DEFAULT_TOL, Tolerances, check_alpha
from .twoaction import (
    EquilibriumSet,
    TwoActionGame,
    _evaluate,
    alpha_rne_set,
    classical_ne_set,
    find_h_zeros,
    y_star,
)

# strict comparisons between utilities ignore differences below this
WELFARE_TOL = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_PROBE = 1e-9


def utility_rational(game: TwoActionGame, alpha: float, z: float) -> float:
    y = y_star(z, alpha)
    return y * float(game.u1(z)) + (1.0 - y) * float(game.u2(z))


def utility_irrational(game: TwoActionGame, alpha: float, z: float) -> float:
    check_alpha(alpha)
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z={z!r} outside [0, 1]")
    return float(game.u1(z)) if z >= 0.5 else float(game.u2(z))


def utility_classical(game: TwoActionGame, z: float) -> float:
    """Rational utility at a classical equilibrium z (everyone rational)."""
    return float(game.u2(z)) if z == 0.0 else float(game.u1(z))


@dataclass(frozen=True)
class Supremum:
    value: float
    argmax: float
    attained: bool

    @property
    def label(self) -> str:
        return "maximum" if self.attained else "supremum (possibly unattained)"


def _golden_max(f, a, b, iters=80):
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a < 1e-13:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def maximise(f: Callable[[float], float], lo: float, hi: float, grid_n: int = 1024) -> Supremum:
    """Supremum of ``f`` over [lo, hi].

    Grid scan, golden-section refinement around the best local maxima, and
    one-sided probes next to jumps and at the interval ends. When a probe
    wins, the value is a limit that ``f`` need not attain.
    """
    zs = np.linspace(lo, hi, grid_n + 1)
    fs = _evaluate(f, zs)
    best_z, best_f = float(zs[np.argmax(fs)]), float(fs.max())

    inner = np.flatnonzero(
        (fs >= np.roll(fs, 1)) & (fs >= np.roll(fs, -1))
        | (np.arange(fs.size) == 0)
        | (np.arange(fs.size) == fs.size - 1)
    )
    for k in sorted(inner, key=lambda k: -fs[k])[:8]:
        a, b = zs[max(k - 1, 0)], zs[min(k + 1, grid_n)]
        z, v = _golden_max(lambda t: float(f(t)), float(a), float(b))
        if v > best_f:
            best_z, best_f = z, v

    steps = np.abs(np.diff(fs))
    scale = float(np.median(steps)) if steps.size else 0.0
    jumps = np.flatnonzero(steps > 50.0 * scale + 1e-9)
    probes = [lo + _PROBE, hi - _PROBE]
    for k in jumps:
        probes += [zs[k] + _PROBE, zs[k + 1] - _PROBE]
    for z in probes:
        if lo <= z <= hi:
            v = float(f(z))
            if v > best_f:
                best_z, best_f = float(z), v
    # a best point hugging a jump whose far side is lower is only a limit
    attained = True
    for k in jumps:
        for c in (zs[k], zs[k + 1]):
            if abs(best_z - c) <= 1e-6 and float(f(c)) < best_f - WELFARE_TOL:
                attained = False
    return Supremum(best_f, best_z, attained)


def _social_objective(game):
    def f(z):
        return z * game.u1(z) + (1.0 - z) * game.u2(z)

    return f


def social_optimum_info(game: TwoActionGame, grid_n: int = 1024, closed_form: bool = True) -> Supremum:
    if grid_n < 256:
        raise ValueError("grid_n must be at least 256")
    if closed_form and game.social_optimum is not None:
        return Supremum(float(game.social_optimum), float("nan"), game.social_optimum_attained)
    return maximise(_social_objective(game), 0.0, 1.0, grid_n)


def social_optimum(game: TwoActionGame, grid_n: int = 1024, closed_form: bool = True) -> float:
    """Best average utility over all population shares, everyone rational."""
    return social_optimum_info(game, grid_n, closed_form).value


def social_optimum_alpha(game: TwoActionGame, alpha: float, grid_n: int = 1024) -> float:
    """Best average utility over shares reachable with an ``alpha`` rational share."""
    alpha = check_alpha(alpha)
    if grid_n < 256:
        raise ValueError("grid_n must be at least 256")

    def objective(z):
        # pieces below keep z feasible, so clipping only removes rounding
        z = np.asarray(z, dtype=float)
        herd = (z >= 0.5).astype(float)
        y = np.clip(np.where(z < 0.5, z / alpha, 1.0 - (1.0 - z) / alpha), 0.0, 1.0)
        w1 = alpha * y + (1.0 - alpha) * herd
        w2 = alpha * (1.0 - y) + (1.0 - alpha) * (1.0 - herd)
        return w1 * game.u1(z) + w2 * game.u2(z)

    pieces = []
    left_end = alpha if alpha < 0.5 else 0.5 - 1e-12
    pieces.append((0.0, left_end))
    pieces.append((max(0.5, 1.0 - alpha), 1.0))
    return max(maximise(objective, lo, hi, grid_n).value for lo, hi in pieces if hi >= lo)


@dataclass(frozen=True)
class WelfareRow:
    z: float
    y: float
    tag: str
    u_rational: float
    u_irrational: float


@dataclass(frozen=True)
class WelfareReport:
    game: str
    alpha: float
    rows: tuple
    classical: tuple  # (z1, rational utility there) for every classical equilibrium
    u_social: float
    u_social_label: str
    u_social_alpha: float
    prop1_holds: bool
    prop2_applies: bool
    prop2_holds: Optional[bool]
    rational_beats_social: tuple
    irrational_beats_some_classical: tuple  # (z, z1) pairs
    rational_to_be_irrational: bool
    note: str = ""

    @property
    def prop2_applies_and_holds(self) -> bool:
        return self.prop2_applies and bool(self.prop2_holds)


def _rows(game, alpha, eq_set: EquilibriumSet):
    rows = [
        WelfareRow(p.z, p.y, p.tag, utility_rational(game, alpha, p.z), utility_irrational(game, alpha, p.z))
        for p in eq_set.points
    ]
    # interval equilibria are represented by their ends and midpoint
    for lo, hi in eq_set.plateaus:
        for z in (lo, 0.5 * (lo + hi), hi):
            rows.append(
                WelfareRow(z, y_star(z, alpha), "plateau", utility_rational(game, alpha, z),
                           utility_irrational(game, alpha, z))
            )
    return sorted(rows, key=lambda r: r.z)


def compare(
    game: TwoActionGame,
    alpha: float,
    eq_set: Optional[EquilibriumSet] = None,
    classical: Optional[EquilibriumSet] = None,
    grid_n: int = 1024,
    tol: Tolerances = DEFAULT_TOL,
) -> WelfareReport:
    """Welfare of each equilibrium against the all-rational benchmark.

    "Rational to be irrational" holds when some equilibrium gives both the
    rational and the herding players strictly more than the rational
    utility at every classical equilibrium.
    """
    alpha = check_alpha(alpha)
    if eq_set is None or classical is None:
        zeros = find_h_zeros(game, grid_n, tol)
        eq_set = eq_set if eq_set is not None else alpha_rne_set(game, alpha, grid_n, tol, zeros=zeros)
        classical = classical if classical is not None else classical_ne_set(game, grid_n, tol, zeros=zeros)

    rows = _rows(game, alpha, eq_set)
    classical_pts = [(p.z, utility_classical(game, p.z)) for p in classical.points]
    for lo, hi in classical.plateaus:
        classical_pts += [(z, utility_classical(game, z)) for z in (lo, 0.5 * (lo + hi), hi)]
    sup = social_optimum_info(game, max(grid_n, 256))
    u_s = sup.value
    u_s_alpha = social_optimum_alpha(game, alpha, max(grid_n, 256))

    prop1 = all(
        r.u_irrational <= r.u_rational + WELFARE_TOL and r.u_irrational <= u_s + WELFARE_TOL for r in rows
    )
    prop2_applies = bool(rows) and eq_set.is_subset_of(classical, tol.dup)
    prop2_holds = None
    if prop2_applies:
        prop2_holds = all(
            abs(r.u_rational - r.u_irrational) <= WELFARE_TOL
            and abs(r.u_irrational - utility_classical(game, r.z)) <= WELFARE_TOL
            and u_s >= r.u_rational - WELFARE_TOL
            for r in rows
        )

    beats_social = tuple(r.z for r in rows if r.u_rational > u_s + WELFARE_TOL)
    beats_classical = tuple(
        (r.z, z1) for r in rows for z1, u1 in classical_pts if r.u_irrational > u1 + WELFARE_TOL
    )
    r2bi = bool(classical_pts) and any(
        all(r.u_irrational > u1 + WELFARE_TOL and r.u_rational > u1 + WELFARE_TOL for _, u1 in classical_pts)
        for r in rows
    )
    return WelfareReport(
        game=game.name,
        alpha=alpha,
        rows=tuple(rows),
        classical=tuple(classical_pts),
        u_social=u_s,
        u_social_label=sup.label,
        u_social_alpha=u_s_alpha,
        prop1_holds=prop1,
        prop2_applies=prop2_applies,
        prop2_holds=prop2_holds,
        rational_beats_social=beats_social,
        irrational_beats_some_classical=beats_classical,
        rational_to_be_irrational=r2bi,
        note="" if rows else "empty equilibrium set",
    )
