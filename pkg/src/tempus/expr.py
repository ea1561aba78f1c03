"""Arithmetic expressions over ``t`` for coefficient definitions.

Grammar: numeric literals, the symbol ``t``, ``+ - * /``, ``^`` with an
integer exponent, unary sign and parentheses. ``^`` is rewritten to Python's ``**`` so it
binds tighter than the other operators; parsing goes through :mod:`ast` with a
node whitelist and nothing is ever passed to ``eval``.
"""
import ast
import operator

import numpy as np

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub,
           ast.Mult: operator.mul, ast.Div: operator.truediv}


class ExpressionError(ValueError):
    pass


def _int_exponent(node):
    sign = 1
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        if isinstance(node.op, ast.USub):
            sign = -sign
        node = node.operand
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return sign * node.value
    raise ExpressionError("'^' needs an integer literal exponent")


def _compile(node):
    if isinstance(node, ast.Expression):
        return _compile(node.body)
    if isinstance(node, ast.Constant) and type(node.value) in (int, float):
        value = float(node.value)
        return lambda t: np.full_like(t, value)
    if isinstance(node, ast.Name) and node.id == "t":
        return lambda t: t
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand)
        if isinstance(node.op, ast.USub):
            return lambda t: -inner(t)
        return inner
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _compile(node.left)
            k = _int_exponent(node.right)
            return lambda t: np.power(base(t), float(k))
        op = _BINOPS.get(type(node.op))
        if op is not None:
            left, right = _compile(node.left), _compile(node.right)
            return lambda t: op(left(t), right(t))
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_expression(text):
    """Return a vectorized ``f(t: ndarray) -> ndarray`` for ``text``."""
    if "**" in text:
        raise ExpressionError("use '^' for powers")
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    return _compile(tree)


def evaluate(text, points):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return parse_expression(text)(np.asarray(points, dtype=float))
