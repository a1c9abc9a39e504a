"""Trick curves, the trick-expression DSL, and the composition algebra.

The four primitive curves are:

* ``O`` -- the ollie, constant at the identity;
* ``S`` -- a backside 180 shove-it, a left-handed half turn about z;
* ``K`` -- a kickflip, a left-handed full turn about y;
* ``U`` -- a right-handed half turn about x (not a legal flip on its own,
  it only appears inside products such as the hardflip).

Expressions combine primitives with pointwise matrix products ``*``,
integer powers ``^``, time rescaling ``@c`` (c a rational in (0, 1]),
path concatenation ``#``, a reversed-landing shift suffix ``!O`` (right
multiplication by diag(-1,-1,1)), and time reversal ``rev(...)``.

Grammar (whitespace-insensitive)::

    expr    := concat
    concat  := product ("#" product)*
    product := shifted ("*" shifted)*
    shifted := scaled ("!O")?
    scaled  := power ("@" RATIONAL)?
    power   := atom ("^" INTEGER)?
    atom    := "O" | "S" | "K" | "U" | "rev" "(" expr ")" | "(" expr ")"

``#`` denotes raw path concatenation (first curve on [0, 1/2] at double
speed, then the second). The landing-aware composition that shifts the
second trick when the first lands reversed is provided by :func:`concat`,
which inserts the ``!O`` marker automatically.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import FlipTrickError
from .so3 import IDENTITY, REVERSED, LandingConfig, Rotation

#: Tolerance for the start/landing configuration checks of a flip.
ENDPOINT_TOL = 1e-9


class UnknownPrimitive(FlipTrickError):
    """Primitive name outside {O, S, K, U}."""


class UnknownTrick(FlipTrickError):
    """Catalog lookup of a name that is not in the catalog."""


class DomainError(FlipTrickError):
    """Evaluation parameter or scale factor outside its domain."""


class NotAFlip(FlipTrickError):
    """Curve does not start at the identity or does not land legally."""


class TrickSyntaxError(FlipTrickError):
    """Parse failure, carrying the byte offset and the expected tokens."""

    def __init__(self, offset: int, expected, found: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        what = f", found {found!r}" if found else ""
        super().__init__(
            f"syntax error at byte {offset}: expected one of "
            f"{{{', '.join(sorted(self.expected))}}}{what}"
        )


# ---------------------------------------------------------------------------
# AST


class TrickExpr:
    """Base class of trick-expression nodes; immutable, compared structurally."""

    def __str__(self) -> str:
        return format_expr(self)


@dataclass(frozen=True)
class Primitive(TrickExpr):
    name: str

    def __post_init__(self):
        if self.name not in _PRIMITIVE_CURVES:
            raise UnknownPrimitive(f"unknown primitive {self.name!r}; expected O, S, K or U")

    __str__ = TrickExpr.__str__


@dataclass(frozen=True)
class Power(TrickExpr):
    base: TrickExpr
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n == 0:
            raise ValueError("power exponent must be a nonzero integer (use power() to simplify)")

    __str__ = TrickExpr.__str__


@dataclass(frozen=True)
class Product(TrickExpr):
    """Pointwise matrix product left(t) @ right(t); non-commutative."""

    left: TrickExpr
    right: TrickExpr

    __str__ = TrickExpr.__str__


@dataclass(frozen=True)
class TimeScale(TrickExpr):
    """base(c*t) for a rational factor c in (0, 1]."""

    base: TrickExpr
    c: Fraction

    def __post_init__(self):
        c = self.c
        if isinstance(c, float):
            c = Fraction(str(c))
        else:
            c = Fraction(c)
        if not (0 < c <= 1):
            raise DomainError(f"time-scale factor {c} outside (0, 1]")
        object.__setattr__(self, "c", c)

    __str__ = TrickExpr.__str__


@dataclass(frozen=True)
class Concat(TrickExpr):
    """Raw path concatenation: left(2t) on [0, 1/2], right(2t-1) after."""

    left: TrickExpr
    right: TrickExpr

    __str__ = TrickExpr.__str__


@dataclass(frozen=True)
class OShift(TrickExpr):
    """Right multiplication by the reversed landing: base(t) @ diag(-1,-1,1)."""

    base: TrickExpr

    __str__ = TrickExpr.__str__


@dataclass(frozen=True)
class Reverse(TrickExpr):
    """Time reversal base(1-t)."""

    base: TrickExpr

    __str__ = TrickExpr.__str__


def power(base: TrickExpr, n: int) -> TrickExpr:
    """Power node with the zero exponent simplified away to the constant curve."""
    if n == 0:
        return Primitive("O")
    return Power(base, n)


# ---------------------------------------------------------------------------
# Closed-form primitive curves


def _ollie(t: float) -> np.ndarray:
    return np.eye(3)


def _shove_it(t: float) -> np.ndarray:
    c, s = math.cos(math.pi * t), math.sin(math.pi * t)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def _kickflip(t: float) -> np.ndarray:
    c, s = math.cos(2.0 * math.pi * t), math.sin(2.0 * math.pi * t)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def _x_half_turn(t: float) -> np.ndarray:
    c, s = math.cos(math.pi * t), math.sin(math.pi * t)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


_PRIMITIVE_CURVES: dict[str, Callable[[float], np.ndarray]] = {
    "O": _ollie,
    "S": _shove_it,
    "K": _kickflip,
    "U": _x_half_turn,
}

_REVERSED_M = REVERSED.m


# ---------------------------------------------------------------------------
# Evaluation


def eval_matrix(expr: TrickExpr, t: float) -> np.ndarray:
    """Evaluate an expression to a raw 3x3 array (no SO(3) validation)."""
    if isinstance(expr, Primitive):
        return _PRIMITIVE_CURVES[expr.name](t)
    if isinstance(expr, Power):
        base = eval_matrix(expr.base, t)
        if expr.n < 0:
            # rotation inverse is the transpose, which is exact
            return np.linalg.matrix_power(base.T, -expr.n)
        return np.linalg.matrix_power(base, expr.n)
    if isinstance(expr, Product):
        return eval_matrix(expr.left, t) @ eval_matrix(expr.right, t)
    if isinstance(expr, TimeScale):
        return eval_matrix(expr.base, float(expr.c) * t)
    if isinstance(expr, Concat):
        if t <= 0.5:
            return eval_matrix(expr.left, 2.0 * t)
        return eval_matrix(expr.right, 2.0 * t - 1.0)
    if isinstance(expr, OShift):
        return eval_matrix(expr.base, t) @ _REVERSED_M
    if isinstance(expr, Reverse):
        return eval_matrix(expr.base, 1.0 - t)
    raise TypeError(f"not a trick expression: {expr!r}")


def evaluate(expr: TrickExpr, t: float) -> Rotation:
    """Evaluate an expression at time t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"time parameter {t!r} outside [0, 1]")
    return Rotation(eval_matrix(expr, t))


# ---------------------------------------------------------------------------
# Printing (inverse of the parser; print/parse round-trips structurally)

_LEVEL_CONCAT, _LEVEL_PRODUCT, _LEVEL_OSHIFT, _LEVEL_SCALE, _LEVEL_POWER, _LEVEL_ATOM = range(1, 7)


def _render(expr: TrickExpr):
    if isinstance(expr, Primitive):
        return expr.name, _LEVEL_ATOM
    if isinstance(expr, Reverse):
        return f"rev({format_expr(expr.base)})", _LEVEL_ATOM
    if isinstance(expr, Power):
        return f"{_wrap(expr.base, _LEVEL_ATOM)}^{expr.n}", _LEVEL_POWER
    if isinstance(expr, TimeScale):
        return f"{_wrap(expr.base, _LEVEL_POWER)}@{expr.c}", _LEVEL_SCALE
    if isinstance(expr, OShift):
        return f"{_wrap(expr.base, _LEVEL_SCALE)}!O", _LEVEL_OSHIFT
    if isinstance(expr, Product):
        return f"{_wrap(expr.left, _LEVEL_PRODUCT)} * {_wrap(expr.right, _LEVEL_OSHIFT)}", _LEVEL_PRODUCT
    if isinstance(expr, Concat):
        return f"{_wrap(expr.left, _LEVEL_CONCAT)} # {_wrap(expr.right, _LEVEL_PRODUCT)}", _LEVEL_CONCAT
    raise TypeError(f"not a trick expression: {expr!r}")


def _wrap(expr: TrickExpr, min_level: int) -> str:
    text, level = _render(expr)
    if level < min_level:
        return f"({text})"
    return text


def format_expr(expr: TrickExpr) -> str:
    """Canonical source text; parse(format_expr(e)) == e."""
    return _render(expr)[0]


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = _re.compile(
    r"\s*(?:(?P<name>[A-Za-z]+)|(?P<number>\d+(?:\.\d+)?)|(?P<oshift>!O)|(?P<punct>[*#@^()/-]))"
)

_ATOM_EXPECTED = ("O", "S", "K", "U", "rev", "(")


@dataclass(frozen=True)
class _Token:
    kind: str  # name | number | oshift | punct | end
    text: str
    offset: int


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            stripped = src[pos:].lstrip()
            if not stripped:
                break
            at = len(src) - len(stripped)
            raise TrickSyntaxError(at, _ATOM_EXPECTED, src[at])
        for kind in ("name", "number", "oshift", "punct"):
            text = m.group(kind)
            if text is not None:
                tokens.append(_Token(kind, text, m.start(kind)))
                break
        pos = m.end()
    tokens.append(_Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected):
        tok = self.peek()
        raise TrickSyntaxError(tok.offset, expected, tok.text or "end of input")

    def expect_punct(self, ch: str) -> _Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != ch:
            self.fail((ch,))
        return self.advance()

    def parse(self) -> TrickExpr:
        expr = self.concat()
        if self.peek().kind != "end":
            self.fail(("*", "#", "end of input"))
        return expr

    def concat(self) -> TrickExpr:
        expr = self.product()
        while self.peek().kind == "punct" and self.peek().text == "#":
            self.advance()
            expr = Concat(expr, self.product())
        return expr

    def product(self) -> TrickExpr:
        expr = self.shifted()
        while self.peek().kind == "punct" and self.peek().text == "*":
            self.advance()
            expr = Product(expr, self.shifted())
        return expr

    def shifted(self) -> TrickExpr:
        expr = self.scaled()
        if self.peek().kind == "oshift":
            self.advance()
            expr = OShift(expr)
        return expr

    def scaled(self) -> TrickExpr:
        expr = self.power()
        if self.peek().kind == "punct" and self.peek().text == "@":
            self.advance()
            expr = TimeScale(expr, self.rational())
        return expr

    def power(self) -> TrickExpr:
        expr = self.atom()
        if self.peek().kind == "punct" and self.peek().text == "^":
            self.advance()
            expr = power(expr, self.integer())
        return expr

    def atom(self) -> TrickExpr:
        tok = self.peek()
        if tok.kind == "name":
            if tok.text in _PRIMITIVE_CURVES:
                self.advance()
                return Primitive(tok.text)
            if tok.text == "rev":
                self.advance()
                self.expect_punct("(")
                inner = self.concat()
                self.expect_punct(")")
                return Reverse(inner)
            self.fail(_ATOM_EXPECTED)
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            inner = self.concat()
            self.expect_punct(")")
            return inner
        self.fail(_ATOM_EXPECTED)

    def integer(self) -> int:
        sign = 1
        if self.peek().kind == "punct" and self.peek().text == "-":
            self.advance()
            sign = -1
        tok = self.peek()
        if tok.kind != "number" or "." in tok.text:
            self.fail(("INTEGER",))
        self.advance()
        return sign * int(tok.text)

    def rational(self) -> Fraction:
        tok = self.peek()
        if tok.kind != "number":
            self.fail(("RATIONAL",))
        self.advance()
        value = Fraction(tok.text)
        if self.peek().kind == "punct" and self.peek().text == "/":
            self.advance()
            den = self.peek()
            if den.kind != "number" or "." in den.text:
                self.fail(("INTEGER",))
            self.advance()
            value /= int(den.text)
        return value


def parse(src: str) -> TrickExpr:
    """Parse DSL source text into a trick expression."""
    if not src or not src.strip():
        raise TrickSyntaxError(0, _ATOM_EXPECTED, "empty input")
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# Flips


@dataclass(frozen=True, eq=False)
class Flip:
    """A trick as a curve of configurations on [0, 1].

    ``landing`` is None for curves (like the bare ``U``) whose final
    configuration is not a legal landing; such curves can only be used
    inside products, never lifted or classified on their own.
    """

    sampler: Callable[[float], Rotation]
    landing: Optional[LandingConfig]
    expr: Optional[TrickExpr] = None

    def __call__(self, t: float) -> Rotation:
        return self.sampler(t)

    @property
    def name(self) -> str:
        return format_expr(self.expr) if self.expr is not None else "<sampled>"


def _landing_of(m: np.ndarray) -> Optional[LandingConfig]:
    if np.abs(m - IDENTITY.m).max() <= ENDPOINT_TOL:
        return LandingConfig.IDENTITY
    if np.abs(m - REVERSED.m).max() <= ENDPOINT_TOL:
        return LandingConfig.REVERSED
    return None


def flip_from_sampler(sampler: Callable[[float], Rotation], expr: Optional[TrickExpr] = None,
                      require_landing: bool = True) -> Flip:
    """Wrap a sampler as a Flip, validating both endpoint conditions."""
    start = sampler(0.0)
    if np.abs(start.m - IDENTITY.m).max() > ENDPOINT_TOL:
        raise NotAFlip("curve does not start at the identity configuration")
    landing = _landing_of(sampler(1.0).m)
    if landing is None and require_landing:
        raise NotAFlip("curve does not land at the identity or reversed configuration")
    return Flip(sampler=sampler, landing=landing, expr=expr)


def make_flip(expr: TrickExpr) -> Flip:
    """Build a validated Flip from an expression."""
    return flip_from_sampler(lambda t: evaluate(expr, t), expr=expr)


def validate_flip(expr: TrickExpr) -> Flip:
    """Alias of :func:`make_flip`; raises NotAFlip for non-landing curves."""
    return make_flip(expr)


def primitive(name: str) -> Flip:
    """The named primitive curve as a Flip.

    ``U`` is returned with ``landing=None``: it is not a flip by itself and
    is rejected by :func:`validate_flip`, but remains usable in products.
    """
    expr = Primitive(name)  # raises UnknownPrimitive
    return flip_from_sampler(lambda t: evaluate(expr, t), expr=expr, require_landing=(name != "U"))


def concat(f: Flip, g: Flip) -> Flip:
    """Landing-aware concatenation: play f then g, each at double speed.

    When f lands reversed, g is replaced by its reversed-landing shift
    g(t) @ diag(-1,-1,1) so the composite is continuous at t = 1/2.
    """
    if f.landing is None or g.landing is None:
        raise NotAFlip("both operands of concat must be legal flips")
    shift = f.landing is LandingConfig.REVERSED

    def sampler(t: float) -> Rotation:
        if t <= 0.5:
            return f.sampler(2.0 * t)
        r = g.sampler(2.0 * t - 1.0)
        return Rotation(r.m @ _REVERSED_M) if shift else r

    expr = None
    if f.expr is not None and g.expr is not None:
        expr = Concat(f.expr, OShift(g.expr) if shift else g.expr)
    landing = (
        LandingConfig.REVERSED
        if (f.landing is LandingConfig.REVERSED) != (g.landing is LandingConfig.REVERSED)
        else LandingConfig.IDENTITY
    )
    out = Flip(sampler=sampler, landing=landing, expr=expr)
    return out


# ---------------------------------------------------------------------------
# Catalog

_CATALOG_SOURCES = (
    ("ollie", "O"),
    ("shoveit", "S"),
    ("fs-shoveit", "S^-1"),
    ("360-shoveit", "S^2"),
    ("fs-360-shoveit", "S^-2"),
    ("540-shoveit", "S^3"),
    ("fs-540-shoveit", "S^-3"),
    ("kickflip", "K"),
    ("double-kickflip", "K^2"),
    ("heelflip", "K^-1"),
    ("varial-kickflip", "S * K"),
    ("360-flip", "S^2 * K"),
    ("varial-heelflip", "S^-1 * K^-1"),
    ("hardflip", "U * K@1/2"),
)

_CATALOG: dict[str, TrickExpr] = {name: parse(src) for name, src in _CATALOG_SOURCES}


def catalog() -> list[tuple[str, TrickExpr]]:
    """All named tricks, in catalog order."""
    return [(name, _CATALOG[name]) for name, _ in _CATALOG_SOURCES]


def lookup(name: str) -> TrickExpr:
    """Expression of a named catalog trick."""
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownTrick(f"unknown trick {name!r}") from None


def trick(name: str) -> Flip:
    """Validated Flip of a named catalog trick."""
    return make_flip(lookup(name))
