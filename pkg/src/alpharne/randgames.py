"""Seeded random two-action games with piecewise-linear utilities."""

from __future__ import annotations

import numpy as np

from .twoaction import TwoActionGame


def piecewise_linear_game(knots, v1, v2, name: str = "pl") -> TwoActionGame:
    knots = np.asarray(knots, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    grid = np.union1d(knots, knots)
    dh = np.diff(np.interp(grid, knots, v1) - np.interp(grid, knots, v2))
    lipschitz = float(np.max(np.abs(dh / np.diff(grid)))) if grid.size > 1 else 0.0
    return TwoActionGame(
        u1=lambda z: np.interp(z, knots, v1),
        u2=lambda z: np.interp(z, knots, v2),
        name=name,
        lipschitz=lipschitz,
    )


def random_pl_game(rng: np.random.Generator, min_knots: int = 3, max_knots: int = 8, name: str = "") -> TwoActionGame:
    """Utilities linear between ``min_knots``..``max_knots`` knots on [0, 1].

    Knots include both ends; values are uniform on [-1, 1].
    """
    n = int(rng.integers(min_knots, max_knots + 1))
    inner = np.sort(rng.uniform(0.0, 1.0, n - 2))
    knots = np.concatenate(([0.0], inner, [1.0]))
    v1 = rng.uniform(-1.0, 1.0, n)
    v2 = rng.uniform(-1.0, 1.0, n)
    return piecewise_linear_game(knots, v1, v2, name or f"pl{n}")


def random_games(seed: int, count: int, **kw) -> list[TwoActionGame]:
    rng = np.random.default_rng(seed)
    return [random_pl_game(rng, name=f"random[{seed}:{i}]", **kw) for i in range(count)]
