"""Scalar functions of n real variables: parsing, evaluation, catalog, convexity probe.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' INT)*
    base   := NUMBER | VAR | FUNC '(' expr (',' expr)* ')' | '(' expr ')'
    VAR    := 'x' INT            (1-based)
    FUNC   := exp | log | abs | sqrt | max | min

``^`` binds tighter than unary minus, so ``-x1^2`` is ``-(x1^2)``; chained
exponents associate to the right.  Evaluation is vectorized over an array
of points of shape ``(m, n)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import ValidationError

EVAL_GUARD = 1e-300


class ParseError(ValidationError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvaluationError(ArithmeticError):
    """f could not be evaluated: a domain condition of some node failed."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


UNARY_FUNCS = ("exp", "log", "abs", "sqrt")
NARY_FUNCS = ("max", "min")

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node) -> str:
    """Print an AST back to the grammar; ``parse(to_text(t))`` rebuilds ``t``."""
    return _show(node, 0)


def _show(node, ctx: int) -> str:
    match node:
        case Num(value):
            s = repr(float(value))
            return f"({s})" if value < 0 or "inf" in s or "nan" in s else s
        case Var(index):
            return f"x{index}"
        case Neg(arg):
            s = "-" + _show(arg, 3)
            return f"({s})" if ctx > 3 else s
        case BinOp(op, left, right):
            p = _PREC[op]
            s = f"{_show(left, p)} {op} {_show(right, p + 1)}"
            return f"({s})" if ctx > p else s
        case Pow(base, exponent):
            s = f"{_show(base, 5)}^{exponent}"
            return f"({s})" if ctx > 4 else s
        case Call(name, args):
            return f"{name}(" + ", ".join(_show(a, 0) for a in args) + ")"
    raise TypeError(f"not an expression node: {node!r}")


def max_var(node) -> int:
    match node:
        case Var(index):
            return index
        case Num():
            return 0
        case Neg(arg) | Pow(arg, _):
            return max_var(arg)
        case BinOp(_, left, right):
            return max(max_var(left), max_var(right))
        case Call(_, args):
            return max(max_var(a) for a in args)
    raise TypeError(f"not an expression node: {node!r}")


def _eval(node, pts: np.ndarray) -> np.ndarray:
    match node:
        case Num(value):
            return np.full(pts.shape[0], float(value))
        case Var(index):
            return pts[:, index - 1]
        case Neg(arg):
            return -_eval(arg, pts)
        case BinOp(op, left, right):
            a, b = _eval(left, pts), _eval(right, pts)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if np.any(np.abs(b) < EVAL_GUARD):
                raise EvaluationError(f"division by zero in {to_text(node)!r}")
            return a / b
        case Pow(base, exponent):
            return _eval(base, pts) ** exponent
        case Call(name, args):
            vals = [_eval(a, pts) for a in args]
            if name == "max":
                return np.max(vals, axis=0)
            if name == "min":
                return np.min(vals, axis=0)
            (v,) = vals
            if name == "exp":
                return np.exp(v)
            if name == "abs":
                return np.abs(v)
            if name == "log":
                if np.any(v <= 0):
                    raise EvaluationError(f"log of a non-positive value in {to_text(node)!r}")
                return np.log(v)
            if name == "sqrt":
                if np.any(v < 0):
                    raise EvaluationError(f"sqrt of a negative value in {to_text(node)!r}")
                return np.sqrt(v)
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<var>x\d+)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str):
    tokens, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        node = self.base()
        exponents = []
        while self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be a non-negative integer literal", pos)
            exponents.append(int(val))
        if exponents:
            e = exponents[-1]
            for k in reversed(exponents[:-1]):
                e = k**e
            node = Pow(node, e)
        return node

    def base(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "var":
            idx = int(val[1:])
            if idx < 1:
                raise ParseError("variables are numbered from x1", pos)
            if idx > self.n:
                raise ParseError(f"variable index {val} out of range for arity {self.n}", pos)
            return Var(idx)
        if kind == "name":
            if val not in UNARY_FUNCS + NARY_FUNCS:
                raise ParseError(f"unknown identifier {val!r}", pos)
            self.take("(")
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.take(")")
            if val in UNARY_FUNCS and len(args) != 1:
                raise ParseError(f"{val} takes exactly one argument", pos)
            return Call(val, tuple(args))
        if val == "(":
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


# ---------------------------------------------------------------------------
# ScalarFunction


class ScalarFunction:
    """A real function of ``arity`` variables evaluable on arrays of points.

    ``fn`` maps an ``(m, arity)`` array to an ``(m,)`` array and may raise
    :class:`EvaluationError`.  ``convex`` records the known convexity status
    (``True``, ``False`` or ``None`` for unknown).
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], arity: int, *,
                 text: str | None = None, tree=None, catalog: tuple[str, dict] | None = None,
                 convex: bool | None = None, default_cube: tuple[float, float] = (-2.0, 2.0)):
        self._fn = fn
        self.arity = arity
        self.text = text
        self.tree = tree
        self.catalog = catalog
        self.convex = convex
        self.default_cube = default_cube

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.arity:
            raise ValidationError(f"expected points with {self.arity} coordinates, got {pts.shape[1]}")
        with np.errstate(all="ignore"):
            vals = np.asarray(self._fn(pts), dtype=float)
        if not np.all(np.isfinite(vals)):
            bad = pts[~np.isfinite(vals)][0]
            raise EvaluationError(f"{self} is not finite at {tuple(bad)}")
        return vals

    def __call__(self, *coords) -> float:
        if len(coords) == 1 and np.ndim(coords[0]) == 1:
            coords = tuple(coords[0])
        return float(self.evaluate(np.array(coords, dtype=float))[0])

    def to_json(self) -> dict:
        if self.catalog is not None:
            name, params = self.catalog
            return {"catalog": name, "params": _params_to_json(params)}
        if self.text is not None:
            return {"expr": self.text}
        raise ValidationError("function has no serializable form")

    def __repr__(self):
        if self.catalog is not None:
            return f"ScalarFunction(catalog={self.catalog[0]!r}, n={self.arity})"
        return f"ScalarFunction({self.text!r}, n={self.arity})"


def parse(text: str, n: int) -> ScalarFunction:
    """Parse ``text`` into a function of ``n`` variables."""
    if n < 1:
        raise ValidationError("arity must be at least 1")
    p = _Parser(text, n)
    tree = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return ScalarFunction(lambda pts: _eval(tree, pts), n, text=text, tree=tree)


def as_scalar_function(f, n: int) -> ScalarFunction:
    """Accept a ScalarFunction, an expression string, or a plain callable of n floats."""
    if isinstance(f, ScalarFunction):
        if f.arity != n:
            raise ValidationError(f"function has arity {f.arity}, expected {n}")
        return f
    if isinstance(f, str):
        return parse(f, n)
    if callable(f):
        return ScalarFunction(lambda pts: np.array([f(*row) for row in pts]), n)
    raise TypeError(f"cannot use {f!r} as a scalar function")


def _params_to_json(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        out[k] = np.asarray(v).tolist() if isinstance(v, (np.ndarray, list, tuple)) else v
    return out


# ---------------------------------------------------------------------------
# Catalog

CONVEX_CATALOG = ("quadratic_form", "log_sum_exp", "max_coord", "p_norm", "exp_coord",
                  "neg_entropy", "power_abs")
NONCONVEX_CATALOG = ("cube_coord", "product_coords", "sin_coord")


def _xlogx(v):
    return np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)


def catalog(name: str, params: dict | None = None, n: int = 1) -> ScalarFunction:
    """Named functions with known convexity.

    Convex: ``quadratic_form`` (``Q`` PSD, optional linear part ``b`` and
    constant ``c``), ``log_sum_exp``, ``max_coord``, ``p_norm`` (``p >= 1``),
    ``exp_coord`` (sum of exponentials), ``neg_entropy`` (sum of x log x on
    ``[0, inf)^n``), ``power_abs`` (sum of ``|x|^p``, ``p >= 1``).
    Not convex: ``cube_coord``, ``product_coords``, ``sin_coord``.
    """
    params = dict(params or {})
    key = (name, params)
    cube = (-2.0, 2.0)

    def need(p_name):
        if p_name not in params:
            raise ValidationError(f"{name} needs parameter {p_name!r}")
        return params[p_name]

    if name == "quadratic_form":
        Q = np.asarray(need("Q"), dtype=float)
        if Q.shape != (n, n):
            raise ValidationError(f"Q must be {n}x{n}, got {Q.shape}")
        Q = (Q + Q.T) / 2
        if np.linalg.eigvalsh(Q)[0] < -1e-12 * max(1.0, np.abs(Q).max()):
            raise ValidationError("quadratic_form needs a positive semidefinite Q")
        b = np.asarray(params.get("b", np.zeros(n)), dtype=float)
        if b.shape != (n,):
            raise ValidationError(f"b must have length {n}")
        c = float(params.get("c", 0.0))
        fn = lambda x: np.einsum("mi,ij,mj->m", x, Q, x) + x @ b + c  # noqa: E731
        convex = True
    elif name == "log_sum_exp":
        fn = lambda x: np.logaddexp.reduce(x, axis=1)  # noqa: E731
        convex = True
    elif name == "max_coord":
        fn = lambda x: np.max(x, axis=1)  # noqa: E731
        convex = True
    elif name in ("p_norm", "power_abs"):
        p = float(need("p"))
        if not p >= 1:
            raise ValidationError(f"{name} needs p >= 1, got {p}")
        if name == "p_norm":
            fn = lambda x: np.linalg.norm(x, ord=p, axis=1)  # noqa: E731
        else:
            fn = lambda x: np.sum(np.abs(x) ** p, axis=1)  # noqa: E731
        convex = True
    elif name == "exp_coord":
        fn = lambda x: np.sum(np.exp(x), axis=1)  # noqa: E731
        convex = True
    elif name == "neg_entropy":
        def fn(x):
            if np.any(x < 0):
                raise EvaluationError("neg_entropy needs non-negative arguments")
            return np.sum(_xlogx(x), axis=1)
        convex = True
        cube = (0.05, 3.0)
    elif name == "cube_coord":
        fn = lambda x: np.sum(x**3, axis=1)  # noqa: E731
        convex = False
    elif name == "product_coords":
        fn = lambda x: np.prod(x, axis=1)  # noqa: E731
        convex = False
    elif name == "sin_coord":
        fn = lambda x: np.sum(np.sin(x), axis=1)  # noqa: E731
        convex = False
    else:
        raise ValidationError(f"unknown catalog function {name!r}")
    return ScalarFunction(fn, n, catalog=key, convex=convex, default_cube=cube)


def function_from_json(obj: dict, n: int) -> ScalarFunction:
    if not isinstance(obj, dict):
        raise ValidationError("f must be an object with 'expr' or 'catalog'")
    if "expr" in obj:
        if not isinstance(obj["expr"], str):
            raise ValidationError("f.expr must be a string")
        return parse(obj["expr"], n)
    if "catalog" in obj:
        return catalog(obj["catalog"], obj.get("params") or {}, n)
    raise ValidationError("f must have 'expr' or 'catalog'")


# ---------------------------------------------------------------------------
# Convexity probe


@dataclass(frozen=True)
class ConvexityVerdict:
    status: str  # "probably_convex" | "not_convex" | "indeterminate"
    witness: tuple | None = None  # (a, b, gap)
    samples: int = 0
    diagnostic: str | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "samples": self.samples}
        if self.witness is not None:
            a, b, gap = self.witness
            out["witness"] = {"a": list(map(float, a)), "b": list(map(float, b)), "gap": float(gap)}
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def midpoint_convexity_probe(f: ScalarFunction, dom, samples: int = 10_000, seed: int = 0,
                             rtol: float = 1e-9) -> ConvexityVerdict:
    """Screen ``f`` for convexity by sampling pairs uniformly in ``dom``.

    A pair ``(a, b)`` is a witness when
    ``f((a+b)/2) > (f(a)+f(b))/2 + rtol * (1 + local scale)``, the local scale
    being the largest of ``|f(a)|, |f(b)|, |f((a+b)/2)|``.  Pairs are drawn in
    a fixed order from ``numpy.random.default_rng(seed)``; the first violation
    by sample index is reported.
    """
    rng = np.random.default_rng(seed)
    lo, hi = dom.lo, dom.hi
    a = lo + (hi - lo) * rng.random((samples, dom.n))
    b = lo + (hi - lo) * rng.random((samples, dom.n))
    # mix in vertex pairs so kinks on faces are reachable
    nv = min(samples, 2 ** min(dom.n, 10))
    verts = np.array([[hi[i] if (k >> i) & 1 else lo[i] for i in range(dom.n)] for k in range(nv)])
    a[:nv] = verts
    b[:nv] = verts[::-1]
    m = (a + b) / 2
    try:
        fa, fb, fm = f.evaluate(a), f.evaluate(b), f.evaluate(m)
    except (EvaluationError, ValidationError) as exc:
        return ConvexityVerdict("indeterminate", samples=samples, diagnostic=str(exc))
    scale = np.maximum.reduce([np.abs(fa), np.abs(fb), np.abs(fm)])
    gap = fm - (fa + fb) / 2
    bad = np.nonzero(gap > rtol * (1 + scale))[0]
    if bad.size:
        i = bad[0]
        return ConvexityVerdict("not_convex", witness=(a[i], b[i], float(gap[i])), samples=samples)
    return ConvexityVerdict("probably_convex", samples=samples)
