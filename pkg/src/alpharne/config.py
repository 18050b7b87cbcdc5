"""Run configuration: a TOML file with [game], [alpha], [solver],
[tolerances], [crosscheck] and [output] sections. Unknown keys are errors.

Example::

    [game]
    preset = "participation"

    [game.params]
    C = 0.5
    P = 0.2

    [alpha]
    start = 0.05
    stop = 0.95
    step = 0.05

    [output]
    format = "csv"
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .catalog import PRESET_NAMES, example1_utility, preset_game
from .core import Tolerances, UtilityFunction, check_alpha
from .twoaction import TwoActionGame
from .utilities import expression_utility, tabular_utility


class ConfigError(ValueError):
    pass


_SECTIONS = {
    "game": {"preset", "expression", "table", "random", "actions", "name", "params", "seed"},
    "alpha": {"value", "values", "start", "stop", "step"},
    "solver": {"grid", "oracle_grid", "budget"},
    "tolerances": {"tie", "argmax", "supp", "sum", "h", "dup"},
    "crosscheck": {"catalog"},
    "output": {"format", "path"},
}
_TABLE_KEYS = {"actions", "resolution", "values"}


@dataclass
class RunConfig:
    preset: Optional[str] = None
    expression: Optional[str] = None
    table: Optional[dict] = None
    random: int = 0
    actions: int = 2
    name: str = ""
    params: dict = field(default_factory=dict)
    seed: int = 0
    alphas: list = field(default_factory=lambda: [1.0])
    grid: int = 1024
    oracle_grid: int = 400
    budget: int = 2_000_000
    tolerances: Tolerances = field(default_factory=Tolerances)
    catalog_check: bool = False
    format: str = "csv"
    path: Optional[str] = None

    @property
    def source(self) -> str:
        for key in ("preset", "expression", "table"):
            if getattr(self, key) is not None:
                return key
        return "random"

    def utility(self) -> UtilityFunction:
        """The configured game as a general utility function."""
        if self.preset == "example1":
            return example1_utility()
        if self.preset is not None:
            return self.two_action_game().utility()
        if self.expression is not None:
            return expression_utility(self.expression, self.actions, self.params)
        if self.table is not None:
            t = self.table
            return tabular_utility(int(t["actions"]), int(t["resolution"]), t["values"])
        raise ConfigError("random games have no single utility")

    def is_two_action(self) -> bool:
        if self.preset is not None:
            return self.preset != "example1"
        if self.table is not None:
            return int(self.table["actions"]) == 2
        return self.actions == 2

    def two_action_game(self) -> TwoActionGame:
        if self.preset is not None and self.preset != "example1":
            try:
                return preset_game(self.preset, **self.params)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad parameters for {self.preset}: {exc}") from None
        if not self.is_two_action():
            raise ConfigError("this command needs a two-action game")
        u = self.utility()
        return TwoActionGame.from_utility(u, name=self.name or u.name)


def _check_keys(where: str, got: dict, allowed: set):
    unknown = set(got) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{where}]: {sorted(unknown)}")


def alpha_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0 or stop < start:
        raise ConfigError("alpha sweep needs step > 0 and stop >= start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(n)]


def parse_config(data: dict[str, Any]) -> RunConfig:
    _check_keys("top level", data, set(_SECTIONS))
    for section, keys in _SECTIONS.items():
        if section in data:
            if not isinstance(data[section], dict):
                raise ConfigError(f"[{section}] must be a table")
            _check_keys(section, data[section], keys)

    cfg = RunConfig()
    game = data.get("game", {})
    sources = [k for k in ("preset", "expression", "table", "random") if k in game]
    if len(sources) != 1:
        raise ConfigError(f"[game] needs exactly one of preset/expression/table/random, got {sources}")
    cfg.preset = game.get("preset")
    cfg.expression = game.get("expression")
    cfg.table = game.get("table")
    cfg.random = int(game.get("random", 0))
    cfg.actions = int(game.get("actions", 2))
    cfg.name = str(game.get("name", ""))
    cfg.params = dict(game.get("params", {}))
    cfg.seed = int(game.get("seed", 0))
    if cfg.preset is not None and cfg.preset not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {cfg.preset!r}; choose from {list(PRESET_NAMES)}")
    if cfg.preset == "example1" and cfg.params:
        raise ConfigError("example1 takes no parameters")
    if cfg.table is not None:
        if not isinstance(cfg.table, dict):
            raise ConfigError("[game] table must be a table")
        _check_keys("game.table", cfg.table, _TABLE_KEYS)
        missing = _TABLE_KEYS - set(cfg.table)
        if missing:
            raise ConfigError(f"[game.table] missing {sorted(missing)}")
    if cfg.random < 0:
        raise ConfigError("random game count must be non-negative")
    if "random" in game and cfg.random == 0:
        raise ConfigError("random = 0 selects no games")

    alpha = data.get("alpha", {})
    given = [k for k in ("value", "values", "start") if k in alpha]
    if len(given) > 1:
        raise ConfigError("[alpha] takes one of value, values or start/stop/step")
    if "value" in alpha:
        alphas = [alpha["value"]]
    elif "values" in alpha:
        alphas = list(alpha["values"])
    elif "start" in alpha:
        if not {"stop", "step"} <= set(alpha):
            raise ConfigError("[alpha] sweep needs start, stop and step")
        alphas = alpha_grid(float(alpha["start"]), float(alpha["stop"]), float(alpha["step"]))
    else:
        alphas = [1.0]
    try:
        cfg.alphas = [check_alpha(a) for a in alphas]
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if not cfg.alphas:
        raise ConfigError("no alpha values")

    solver = data.get("solver", {})
    cfg.grid = int(solver.get("grid", cfg.grid))
    cfg.oracle_grid = int(solver.get("oracle_grid", cfg.oracle_grid))
    cfg.budget = int(solver.get("budget", cfg.budget))
    cfg.tolerances = Tolerances(**{k: float(v) for k, v in data.get("tolerances", {}).items()})
    cfg.catalog_check = bool(data.get("crosscheck", {}).get("catalog", False))

    out = data.get("output", {})
    cfg.format = out.get("format", "csv")
    cfg.path = out.get("path")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"output format must be csv or json, not {cfg.format!r}")
    return cfg


def read_toml(path: str | Path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def load_config(path: str | Path) -> RunConfig:
    return parse_config(read_toml(path))
