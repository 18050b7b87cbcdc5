"""Command-line front end: ``alpharne solve|welfare|sweep|crosscheck``.

Exit codes: 0 success, 1 configuration or parameter error, 2 empty
equilibrium set, 3 cross-check mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

import numpy as np

from . import catalog
from .config import ConfigError, RunConfig, parse_config, read_toml
from .core import verify_alpha_rne
from .oracle import BudgetExceeded, GridSpec, cross_check, enumerate_alpha_rne
from .randgames import random_games
from .twoaction import alpha_rne_set, certify, find_h_zeros, y_star
from .welfare import compare

EXIT_OK, EXIT_CONFIG, EXIT_EMPTY, EXIT_MISMATCH = 0, 1, 2, 3

SOLVE_COLUMNS = ("alpha", "z", "y_star", "tag", "margin_h", "verified")
SOLVE_MULTI_COLUMNS = ("alpha", "mu", "mu_r", "majority", "source", "violation", "verified")
WELFARE_COLUMNS = (
    "alpha", "z", "y_star", "tag", "u_rational", "u_irrational",
    "u_social", "u_social_label", "u_social_alpha",
    "rational_beats_social", "irrational_beats_classical",
    "prop1_holds", "prop2_applies", "prop2_holds", "rational_to_be_irrational",
)
SWEEP_COLUMNS = ("alpha", "z", "tag")
CROSSCHECK_COLUMNS = ("game", "alpha", "resolution", "theory", "status", "matched", "missed", "spurious")


def _num(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        return "0"
    return f"{x:.12g}"


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return _num(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) else float(_num(v))
    return v


def render(rows: list[dict], columns, fmt: str) -> str:
    if fmt == "json":
        data = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _vec(v) -> str:
    return " ".join(_num(x) for x in v)


def _solve_two_action(cfg: RunConfig) -> list[dict]:
    game = cfg.two_action_game()
    zeros = find_h_zeros(game, cfg.grid, cfg.tolerances)
    rows = []
    for alpha in cfg.alphas:
        eq = alpha_rne_set(game, alpha, cfg.grid, cfg.tolerances, zeros=zeros)
        for p in eq.points:
            rows.append(dict(alpha=alpha, z=p.z, y_star=p.y, tag=p.tag, margin_h=p.margin, verified=p.verified))
        for lo, hi in eq.plateaus:
            for z, tag in ((lo, "plateau-lo"), (hi, "plateau-hi")):
                rows.append(dict(
                    alpha=alpha, z=z, y_star=y_star(z, alpha), tag=tag, margin_h=-abs(game.h(z)),
                    verified=certify(game, z, alpha, cfg.tolerances).ok,
                ))
    return rows


def _solve_multi(cfg: RunConfig) -> list[dict]:
    u = cfg.utility()
    grid = GridSpec(cfg.oracle_grid, cfg.budget)
    rows = []
    for alpha in cfg.alphas:
        if cfg.preset == "example1" and alpha < 0.5:
            for pair in catalog.example1_fixture(alpha):
                v = verify_alpha_rne(pair, u, alpha, cfg.tolerances)
                rows.append(dict(alpha=alpha, mu=_vec(pair.mu), mu_r=_vec(pair.mu_r), majority=v.majority,
                                 source="fixture", violation=v.support_violation, verified=v.ok))
        for c in enumerate_alpha_rne(u, alpha, grid, cfg.tolerances):
            hit = c.representative
            v = verify_alpha_rne(hit.pair, u, alpha, cfg.tolerances)
            rows.append(dict(alpha=alpha, mu=_vec(hit.pair.mu), mu_r=_vec(hit.pair.mu_r), majority=c.majority,
                             source="oracle", violation=hit.violation, verified=v.ok))
    return rows


def cmd_solve(cfg: RunConfig):
    if cfg.is_two_action():
        return _solve_two_action(cfg), SOLVE_COLUMNS
    return _solve_multi(cfg), SOLVE_MULTI_COLUMNS


def cmd_welfare(cfg: RunConfig):
    game = cfg.two_action_game()
    rows = []
    for alpha in cfg.alphas:
        rep = compare(game, alpha, grid_n=max(cfg.grid, 256), tol=cfg.tolerances)
        beats_classical = {z for z, _ in rep.irrational_beats_some_classical}
        for r in rep.rows:
            rows.append(dict(
                alpha=alpha, z=r.z, y_star=r.y, tag=r.tag,
                u_rational=r.u_rational, u_irrational=r.u_irrational,
                u_social=rep.u_social, u_social_label=rep.u_social_label, u_social_alpha=rep.u_social_alpha,
                rational_beats_social=r.z in rep.rational_beats_social,
                irrational_beats_classical=r.z in beats_classical,
                prop1_holds=rep.prop1_holds, prop2_applies=rep.prop2_applies,
                prop2_holds=rep.prop2_holds, rational_to_be_irrational=rep.rational_to_be_irrational,
            ))
    return rows, WELFARE_COLUMNS


def cmd_sweep(cfg: RunConfig):
    rows = [
        {k: r[k] for k in SWEEP_COLUMNS}
        for r in _solve_two_action(cfg)
    ]
    rows.sort(key=lambda r: (r["alpha"], r["z"]))
    return rows, SWEEP_COLUMNS


def _report_row(rep, theory):
    return dict(
        game=rep.game, alpha=rep.alpha, resolution=rep.resolution, theory=theory,
        status="all matched" if rep.ok else "MISMATCH",
        matched=len(rep.matched),
        missed=" ".join(_cell(m) if not isinstance(m, tuple) else f"[{_num(m[0])},{_num(m[1])}]" for m in rep.missed),
        spurious=" ".join(_num(s) for s in rep.spurious),
    )


def cmd_crosscheck(cfg: RunConfig):
    grid = GridSpec(cfg.oracle_grid, cfg.budget)
    if cfg.source == "random":
        games = random_games(cfg.seed, cfg.random)
    else:
        games = [cfg.two_action_game()]
    rows = []
    for game in games:
        zeros = find_h_zeros(game, cfg.grid, cfg.tolerances)
        for alpha in cfg.alphas:
            theory = alpha_rne_set(game, alpha, cfg.grid, cfg.tolerances, zeros=zeros)
            rows.append(_report_row(cross_check(game, alpha, grid, cfg.tolerances, theory=theory), "solver"))
            if cfg.catalog_check and cfg.preset in catalog.PRESETS:
                table = catalog.preset_equilibria(cfg.preset, alpha, cfg.tolerances, **cfg.params)
                rows.append(_report_row(cross_check(game, alpha, grid, cfg.tolerances, theory=table), "catalog"))
    return rows, CROSSCHECK_COLUMNS


COMMANDS = {"solve": cmd_solve, "welfare": cmd_welfare, "sweep": cmd_sweep, "crosscheck": cmd_crosscheck}


def _parse_param(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise ConfigError(f"--param expects NAME=VALUE, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise ConfigError(f"--param {key}: {value!r} is not a number") from None


def build_config(args) -> RunConfig:
    """Merge the config file (if any) with command-line overrides."""
    data = read_toml(args.config) if args.config else {}
    if args.preset is not None:
        game = data.setdefault("game", {})
        for key in ("preset", "expression", "table", "random"):
            game.pop(key, None)
        game["preset"] = args.preset
    if args.param:
        params = data.setdefault("game", {}).setdefault("params", {})
        params.update(dict(_parse_param(p) for p in args.param))
    if args.alpha:
        data["alpha"] = {"values": list(args.alpha)}
    if "game" not in data:
        raise ConfigError("no game given: use --config or --preset")
    cfg = parse_config(data)
    if args.format is not None:
        cfg.format = args.format
    if args.out is not None:
        cfg.path = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.grid is not None:
        if args.command == "crosscheck" or (args.command == "solve" and not cfg.is_two_action()):
            cfg.oracle_grid = args.grid
        else:
            cfg.grid = args.grid
    return cfg


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, help="seed for random games")
    common.add_argument(
        "--grid", type=int, metavar="N",
        help="zero-scan grid, or simplex resolution for crosscheck and games with 3+ actions",
    )
    common.add_argument("--preset", choices=catalog.PRESET_NAMES, help="use a preset game")
    common.add_argument("--param", action="append", metavar="NAME=VALUE", help="preset or expression parameter")
    common.add_argument("--alpha", type=float, action="append", help="rational share (repeatable)")

    parser = argparse.ArgumentParser(prog="alpharne", description="Equilibria of mean-field games with herding players.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="equilibrium set for each alpha")
    sub.add_parser("welfare", parents=[common], help="utilities at each equilibrium")
    sub.add_parser("sweep", parents=[common], help="long-format (alpha, z, tag) data")
    sub.add_parser("crosscheck", parents=[common], help="compare with brute-force grid search")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        rows, columns = COMMANDS[args.command](cfg)
    except (ConfigError, BudgetExceeded, ValueError) as exc:
        print(f"alpharne: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = render(rows, columns, cfg.format)
    if cfg.path:
        with open(cfg.path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.command == "crosscheck":
        return EXIT_OK if all(r["status"] == "all matched" for r in rows) else EXIT_MISMATCH
    return EXIT_OK if rows else EXIT_EMPTY


if __name__ == "__main__":
    sys.exit(main())
