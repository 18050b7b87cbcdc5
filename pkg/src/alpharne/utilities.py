"""Ways of supplying a utility function without writing Python.

* expression -- a small arithmetic language over the action ``a`` and the
  population shares ``mu1 .. muN`` (``z`` is an alias for ``mu1``), e.g.
  ``"-2*z if a == 1 else -1"``.
* tabular -- utility values on a simplex grid, interpolated piecewise
  linearly.
"""

from __future__ import annotations

import ast
import math
import operator
import re
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import UtilityFunction, simplex_grid

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.Mod: operator.mod,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos, ast.Not: operator.not_}
_CMPOPS = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}
_FUNCS = {
    "min": min,
    "max": max,
    "abs": abs,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "ind": lambda c: 1.0 if c else 0.0,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_MU_NAME = re.compile(r"^mu(\d+)$")


class ExpressionError(ValueError):
    pass


def _compile(node, n_actions, params):
    """Turn a checked AST node into a closure ``env -> value``."""
    if isinstance(node, ast.Expression):
        return _compile(node.body, n_actions, params)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
        value = float(node.value)
        return lambda env: value
    if isinstance(node, ast.Name):
        name = node.id
        if name == "a":
            return lambda env: env[0]
        if name == "z":
            if n_actions != 2:
                raise ExpressionError("'z' is only defined for two-action games")
            return lambda env: env[1][0]
        m = _MU_NAME.match(name)
        if m:
            k = int(m.group(1))
            if not 1 <= k <= n_actions:
                raise ExpressionError(f"{name} out of range for {n_actions} actions")
            return lambda env, i=k - 1: env[1][i]
        if name in params:
            value = float(params[name])
            return lambda env: value
        if name in _CONSTS:
            value = _CONSTS[name]
            return lambda env: value
        raise ExpressionError(f"unknown name {name!r}")
    if isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name) and node.value.id == "mu":
        index = node.slice
        if not (isinstance(index, ast.Constant) and isinstance(index.value, int)):
            raise ExpressionError("mu[...] needs an integer literal index")
        if not 1 <= index.value <= n_actions:
            raise ExpressionError(f"mu[{index.value}] out of range")
        return lambda env, i=index.value - 1: env[1][i]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left = _compile(node.left, n_actions, params)
        right = _compile(node.right, n_actions, params)
        return lambda env: op(left(env), right(env))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        op = _UNARY[type(node.op)]
        inner = _compile(node.operand, n_actions, params)
        return lambda env: op(inner(env))
    if isinstance(node, ast.Compare):
        ops = [_CMPOPS[type(o)] for o in node.ops if type(o) in _CMPOPS]
        if len(ops) != len(node.ops):
            raise ExpressionError("unsupported comparison")
        parts = [_compile(n, n_actions, params) for n in [node.left, *node.comparators]]

        def compare(env):
            vals = [p(env) for p in parts]
            return all(op(x, y) for op, x, y in zip(ops, vals, vals[1:]))

        return compare
    if isinstance(node, ast.BoolOp):
        parts = [_compile(v, n_actions, params) for v in node.values]
        if isinstance(node.op, ast.And):
            return lambda env: all(p(env) for p in parts)
        return lambda env: any(p(env) for p in parts)
    if isinstance(node, ast.IfExp):
        test = _compile(node.test, n_actions, params)
        yes = _compile(node.body, n_actions, params)
        no = _compile(node.orelse, n_actions, params)
        return lambda env: yes(env) if test(env) else no(env)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        fn = _FUNCS.get(node.func.id)
        if fn is None:
            raise ExpressionError(f"unknown function {node.func.id!r}")
        args = [_compile(arg, n_actions, params) for arg in node.args]
        return lambda env: fn(*(arg(env) for arg in args))
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def expression_utility(
    source: str, n_actions: int, params: Optional[Mapping[str, float]] = None
) -> UtilityFunction:
    """Compile ``source`` into a :class:`UtilityFunction`.

    Comparisons evaluate to 1/0 when used arithmetically, so indicators can
    be written inline: ``(C + P/z*(z > 0))*(a == 1) + (a == 2)`` would divide
    by zero at z = 0, while ``C + (P/z if z > 0 else 0)`` does not.
    """
    params = dict(params or {})
    clash = {"a", "z", "mu"} & set(params)
    if clash:
        raise ExpressionError(f"parameter names shadow variables: {sorted(clash)}")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {source!r}: {exc.msg}") from None
    fn = _compile(tree, int(n_actions), params)

    def evaluator(a, mu):
        return float(fn((float(a), mu)))

    return UtilityFunction(n_actions, evaluator, kind="expression", name=source)


class SimplexInterpolator:
    """Piecewise-linear interpolation of grid values on the probability simplex.

    Works in cumulative coordinates s_i = G*(mu_1 + ... + mu_i), where the
    simplex is the ordered region 0 <= s_1 <= ... <= s_{n-1} <= G and the
    Freudenthal triangulation of the integer lattice respects that order.
    """

    def __init__(self, n_actions: int, resolution: int, values: np.ndarray):
        self.n = int(n_actions)
        self.G = int(resolution)
        counts = simplex_grid(self.n, self.G)
        values = np.asarray(values, dtype=float)
        if values.shape[-1] != len(counts):
            raise ValueError(
                f"expected {len(counts)} grid values per action for "
                f"{self.n} actions at resolution {self.G}, got {values.shape[-1]}"
            )
        self.values = values
        cum = np.cumsum(counts, axis=1)[:, :-1]
        self._index = {tuple(int(c) for c in row): i for i, row in enumerate(cum)}

    def weights(self, mu: Sequence[float]) -> list[tuple[int, float]]:
        """Grid-point indices and barycentric weights for ``mu``."""
        mu = np.asarray(mu, dtype=float)
        s = np.clip(np.cumsum(mu)[:-1] * self.G, 0.0, self.G)
        base = np.floor(s + 1e-12).astype(np.int64)
        base = np.minimum(base, self.G)
        frac = np.clip(s - base, 0.0, 1.0)
        # larger fractions first; ties put the higher coordinate first so the
        # walk never leaves the ordered region
        order = sorted(range(len(s)), key=lambda i: (-frac[i], -i))
        fs = [frac[i] for i in order]
        out = []
        vertex = base.copy()
        w0 = 1.0 - (fs[0] if fs else 0.0)
        if w0 > 0:
            out.append((self._index[tuple(int(v) for v in vertex)], w0))
        for k, i in enumerate(order):
            vertex[i] += 1
            w = fs[k] - (fs[k + 1] if k + 1 < len(fs) else 0.0)
            if w > 0:
                out.append((self._index[tuple(int(v) for v in vertex)], w))
        return out

    def __call__(self, row: int, mu: Sequence[float]) -> float:
        return float(sum(w * self.values[row, i] for i, w in self.weights(mu)))


def tabular_utility(n_actions: int, resolution: int, values) -> UtilityFunction:
    """Utility from per-action values on ``simplex_grid(n_actions, resolution)``.

    ``values`` is indexable by action (1-based keys or a list in action
    order); each entry lists one value per grid point in the grid's
    lexicographic order.
    """
    if isinstance(values, Mapping):
        rows = [values[k] if k in values else values[str(k)] for k in range(1, n_actions + 1)]
    else:
        rows = list(values)
    table = np.asarray(rows, dtype=float)
    if table.ndim != 2 or table.shape[0] != n_actions:
        raise ValueError(f"need one row of values per action ({n_actions})")
    interp = SimplexInterpolator(n_actions, resolution, table)

    def evaluator(a, mu):
        return interp(a - 1, mu)

    return UtilityFunction(n_actions, evaluator, kind="tabular", name=f"table G={resolution}")
