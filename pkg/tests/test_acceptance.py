"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line; the lines are printed in the
pytest terminal summary and by ``python tests/test_acceptance.py``.
"""

from functools import lru_cache

import numpy as np
import pytest

from alpharne import catalog
from alpharne.catalog import (
    ParticipationParams,
    RoutingParams,
    bandwidth_game,
    example1_fixture,
    example1_utility,
    participation_game,
    routing_game,
)
from alpharne.cli import cmd_sweep
from alpharne.config import parse_config
from alpharne.core import verify_alpha_rne
from alpharne.oracle import GridSpec, cross_check, enumerate_alpha_rne
from alpharne.randgames import random_games
from alpharne.twoaction import alpha_rne_set, classical_ne_set, find_h_zeros
from alpharne.welfare import compare, social_optimum, utility_irrational

TOL = 1e-9
RESULTS = {}
ALPHAS_005 = [round(0.05 * k, 2) for k in range(1, 21)]


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def same_points(a, b, tol=TOL):
    a, b = sorted(a), sorted(b)
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def test_1_routing_case_table():
    bad, margins = [], []
    for gamma in (1.25, 2.0, 4.0):
        p = RoutingParams(gamma)
        game = routing_game(p)
        for alpha in ALPHAS_005:
            got = alpha_rne_set(game, alpha)
            want = catalog.routing_equilibria(p, alpha)
            if not same_points(got.zs, want.zs) or not all(q.verified for q in got):
                bad.append((gamma, alpha, got.zs, want.zs))
        # regime boundaries: alpha = min(Delta, 1 - Delta) and alpha = 1/2
        for alpha in sorted({min(p.delta, 1 - p.delta), 0.5}):
            got = alpha_rne_set(game, alpha)
            margins += [f"g={gamma:g},a={alpha:g}:{q.tag}@{q.z:.3g}={q.margin + 0.0:.2g}" for q in got]
    ok = record(1, not bad, f"{3 * 20} alphas x gammas, mismatches={bad}; boundary margins: {'; '.join(margins)}")
    assert ok


def _participation_cases():
    C = 0.5
    for alpha in (0.2, 0.3, 0.5, 0.7):
        for P in (0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8):
            if alpha == 0.5 and 0.25 <= P < 0.5:
                continue  # the half-alpha row is stated for P < (1 - C)/2
            yield C, P, alpha


def test_2_participation_case_tables():
    diffs = []
    n = 0
    for C, P, alpha in _participation_cases():
        n += 1
        p = ParticipationParams(C, P)
        got = alpha_rne_set(participation_game(p), alpha)
        want = catalog.participation_equilibria(p, alpha)
        if not same_points(got.zs, want.zs):
            extra = sorted(set(np.round(want.zs, 9)) ^ set(np.round(got.zs, 9)))
            diffs.append((P, alpha, extra, C + P - 1))
    only_z1 = all(extra == [1.0] and h1 < 0 for _, _, extra, h1 in diffs)
    detail = f"{n - len(diffs)}/{n} (C,P,alpha) cases equal"
    if diffs:
        detail += (
            f"; {len(diffs)} low-reward cases differ"
            + (" only at z=1, which the table lists although h(1)=C+P-1<0 there" if only_z1 else f": {diffs}")
        )
    ok = record(2, not diffs, detail)
    assert ok


def test_3_bandwidth_numbers():
    game = bandwidth_game()
    eq = alpha_rne_set(game, 0.25)
    rep = compare(game, 0.25)
    row = next(r for r in rep.rows if r.z == 0.25)
    u_i = [utility_irrational(game, a, a) for a in (0.2, 0.1, 0.05, 0.01)]
    checks = {
        "set": same_points(eq.zs, [0.25, 1.0]),
        "u_R": row.u_rational == 0.75,
        "u_I": row.u_irrational == 0.375,
        "u_S": social_optimum(game) == 0.5,
        "r2bi": rep.rational_to_be_irrational,
        "u_I->1/2": all(abs(v - (1 - a) / 2) < 1e-15 for v, a in zip(u_i, (0.2, 0.1, 0.05, 0.01)))
        and all(x < y for x, y in zip(u_i, u_i[1:]))
        and u_i[-1] < 0.5,
    }
    ok = record(3, all(checks.values()), f"checks={checks}, u_I(alpha)={[round(v, 4) for v in u_i]}")
    assert ok


@lru_cache(maxsize=None)
def random_family():
    rng = np.random.default_rng(2024)
    games = random_games(seed=20240601, count=500)
    out = []
    for g in games:
        zeros = find_h_zeros(g)
        n1 = classical_ne_set(g, zeros=zeros)
        alphas = (0.5, float(rng.uniform(0.02, 0.5)), float(rng.uniform(0.5, 1.0)))
        out.append((g, zeros, n1, [(a, alpha_rne_set(g, a, zeros=zeros)) for a in alphas]))
    return out


def _set_structure_failures(g, n1, sets, eps=1e-10):
    fails = []
    for q in n1:
        z, h = q.z, g.h(q.z)
        if not (abs(h) <= eps or (z == 0.0 and h <= eps) or (z == 1.0 and h >= -eps)) or not q.verified:
            fails.append(("a", z))
    for alpha, eq in sets:
        if not all(q.verified for q in eq):
            fails.append(("d", alpha))
        if alpha > 0.5:
            if not same_points(eq.zs, n1.zs):
                fails.append(("b", alpha))
        else:
            allowed = [z for z in n1.zs if z <= alpha + eps or z >= 1 - alpha - eps] + [alpha, 1 - alpha]
            if not all(min(abs(z - w) for w in allowed) <= TOL for z in eq.zs):
                fails.append(("c", alpha))
    return fails


def test_4_equilibrium_set_properties():
    fails = []
    for g, _, n1, sets in random_family():
        fails += [(g.name, f) for f in _set_structure_failures(g, n1, sets)]
    n_pts = sum(len(eq) for *_, sets in random_family() for _, eq in sets)
    ok = record(4, not fails, f"500 games x 3 alphas, {n_pts} equilibria checked, failures={fails[:5]}")
    assert ok


def test_5_welfare_properties():
    fails = []
    applies = 0
    for g, zeros, n1, sets in random_family():
        for alpha, eq in sets:
            rep = compare(g, alpha, eq_set=eq, classical=n1)
            if not rep.prop1_holds:
                fails.append((g.name, alpha, "prop1"))
            if rep.prop2_applies:
                applies += 1
                if not rep.prop2_holds:
                    fails.append((g.name, alpha, "prop2"))
    ok = record(5, not fails, f"1500 reports, N_alpha within N_1 in {applies}, failures={fails[:5]}")
    assert ok


def test_6_oracle_equivalence():
    presets = [
        routing_game(RoutingParams(2.0)),
        routing_game(RoutingParams(1.25)),
        participation_game(ParticipationParams(0.5, 0.6)),
        participation_game(ParticipationParams(0.5, 0.2)),
        bandwidth_game(),
    ]
    bad = []
    n = 0
    for g in presets:
        for alpha in (0.1, 0.25, 0.3, 0.45, 0.5, 0.7, 1.0):
            rep = cross_check(g, alpha, GridSpec(400))
            n += 1
            if not rep.ok:
                bad.append(rep.summary())
    for g in random_games(seed=77, count=50):
        for alpha in (0.3, 0.7):
            rep = cross_check(g, alpha, GridSpec(200))
            n += 1
            if not rep.ok:
                bad.append(rep.summary())
    ok = record(6, not bad, f"{n} cross-checks (presets G=400, random G=200), mismatches={bad}")
    assert ok


def test_7_example1():
    u = example1_utility()
    clusters = enumerate_alpha_rne(u, 0.3, GridSpec(100))
    targets = [(1, 0, 0), (0.3, 0.7, 0), (0.3, 0, 0.7)]
    covered = [min(c.distance_to(t) for c in clusters) <= 1e-9 for t in targets]
    fixture_ok = all(verify_alpha_rne(p, u, 0.3) for p in example1_fixture(0.3))
    ok = record(7, all(covered) and fixture_ok,
                f"{len(clusters)} clusters, targets covered={covered}, fixture verified={fixture_ok}")
    assert ok


def _highlight_cells():
    """(game, regime, row, expected, observed) for every stated cell."""
    cells = []

    def add(label, game, alpha, r2=None, r3=None):
        rep = compare(game, alpha)
        a, b = round(alpha, 9), round(1 - alpha, 9)
        beats = {round(z, 9) for z in rep.rational_beats_social}
        irr = {round(z, 9) for z, _ in rep.irrational_beats_some_classical}
        cells.append((label, "u_R >= u_I", "yes", "yes" if rep.prop1_holds else "no"))
        if r2 is not None:
            cells.append((label, "u_R(alpha) > u_S", r2, "yes" if a in beats else "no"))
        if r3 is not None:
            want = {"routing": set(), "alpha": {a}, "both": {a, b}}[r3]
            seen = "yes" if want and want <= irr else ("no" if not irr else f"only {sorted(irr)}")
            cells.append((label, "u_I > u_R1 for some N_1 point", "yes" if want else "no", seen))
        cells.append((label, "rational to be irrational",
                      "yes" if "bandwidth" in label else "no",
                      "yes" if rep.rational_to_be_irrational else "no"))

    add("routing gamma=2 alpha=0.3", routing_game(RoutingParams(2.0)), 0.3, r2="yes", r3="routing")
    add("participation higher P (C=0.5,P=0.6) alpha=0.3", participation_game(ParticipationParams(0.5, 0.6)), 0.3,
        r2="yes")
    add("participation lower P (C=0.5,P=0.2) alpha=0.3", participation_game(ParticipationParams(0.5, 0.2)), 0.3,
        r3="both")
    add("bandwidth alpha=0.25", bandwidth_game(), 0.25, r2="yes", r3="alpha")
    return cells


def test_8_highlight_flags():
    cells = _highlight_cells()
    wrong = [f"{g} / {row}: expected {e}, got {o}" for g, row, e, o in cells if e != o]
    detail = f"{len(cells) - len(wrong)}/{len(cells)} cells reproduced; differing: {wrong}"
    if wrong:
        # diagnosis: rerun the lower-P cell against the tabulated classical set
        p = ParticipationParams(0.5, 0.2)
        game = participation_game(p)
        tabulated = catalog.participation_equilibria(p, 1.0)
        rep = compare(game, 0.3, classical=tabulated, eq_set=alpha_rne_set(game, 0.3))
        detail += (
            f"; against the tabulated N_1={sorted(round(z, 9) for z in tabulated.zs)} "
            f"(z=1 verified: {tabulated.points[-1].verified}) the cell would read "
            f"{sorted({round(z, 9) for z, _ in rep.irrational_beats_some_classical})}"
        )
    ok = record(8, not wrong, detail)
    assert ok


def test_9_fig1_sweep():
    cfg = parse_config({
        "game": {"expression": "(z - 0.2)*(z - 0.5)*(z - 0.8) if a == 1 else 0"},
        "alpha": {"values": [0.4, 0.6, 1.0]},
    })
    rows, _ = cmd_sweep(cfg)
    by = {}
    for r in rows:
        by.setdefault(r["alpha"], []).append((round(r["z"], 9), r["tag"]))
    at04 = dict(by[0.4])
    ok = (
        0.5 not in at04
        and at04.get(0.2) == at04.get(0.8) == "zero-of-h"
        and at04.get(0.4) == "new-alpha"
        and at04.get(0.6) == "new-one-minus-alpha"
        and sorted(at04) == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
        and by[0.6] == by[1.0]
    )
    record(9, ok, f"alpha=0.4 -> {by[0.4]}; alpha=0.6 equals N_1: {by[0.6] == by[1.0]}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
