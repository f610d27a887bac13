"""Expression grammar for custom sublevel domains.

A custom domain is ``{rho < 0}`` for a real expression in the variables
``x1, y1, ..., xd, yd`` (real and imaginary parts of the coordinates).
Allowed: numeric literals, ``+ - * / **``, unary minus, the constants
``pi`` and ``e``, and the functions ``exp log sqrt abs sin cos min max``
(``min``/``max`` are elementwise and take two or more arguments).
See ``docs/expressions.md``.
"""

from __future__ import annotations

import ast
import math
import re

import numpy as np

from .errors import InputError

_FUNCS = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "sin": np.sin,
    "cos": np.cos,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}
_VAR = re.compile(r"^([xy])([1-9][0-9]*)$")


def _compile(node, d):
    if isinstance(node, ast.Expression):
        return _compile(node.body, d)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        value = float(node.value)
        return lambda x, y: value
    if isinstance(node, ast.Name):
        if node.id in _CONSTS:
            value = _CONSTS[node.id]
            return lambda x, y: value
        m = _VAR.match(node.id)
        if m is None:
            raise InputError(f"unknown name {node.id!r} in expression")
        j = int(m.group(2)) - 1
        if j >= d:
            raise InputError(f"variable {node.id!r} exceeds dimension d={d}")
        if m.group(1) == "x":
            return lambda x, y: x[..., j]
        return lambda x, y: y[..., j]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, d)
        if isinstance(node.op, ast.USub):
            return lambda x, y: -inner(x, y)
        return inner
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left, right = _compile(node.left, d), _compile(node.right, d)
        return lambda x, y: op(left(x, y), right(x, y))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        args = [_compile(a, d) for a in node.args]
        if name in ("min", "max"):
            if len(args) < 2:
                raise InputError(f"{name}() needs at least two arguments")
            red = np.minimum if name == "min" else np.maximum
            def call(x, y, args=args, red=red):
                out = args[0](x, y)
                for a in args[1:]:
                    out = red(out, a(x, y))
                return out
            return call
        if name in _FUNCS and len(args) == 1:
            f, a = _FUNCS[name], args[0]
            return lambda x, y: f(a(x, y))
        raise InputError(f"unsupported function call {name!r}")
    raise InputError(f"unsupported syntax: {ast.dump(node)[:60]}")


def compile_expression(text: str, d: int):
    """Return ``rho(z)`` evaluating ``text`` on complex arrays of shape ``(..., d)``."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse expression {text!r}: {exc.msg}") from None
    f = _compile(tree, d)

    def rho(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            out = f(z.real, z.imag)
        return np.broadcast_to(np.asarray(out, dtype=float), z.shape[:-1]).copy()

    rho.expression = text
    return rho
