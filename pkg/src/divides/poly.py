"""Exact rational polynomials and a small expression parser.

The grammar accepts ``+ - * / ^``, parentheses, integer and decimal literals,
implicit multiplication (``5x^2``), variables and the Chebyshev builtin
``T(d, expr)``.  Named parameters (``s`` and friends) are substituted with
exact rationals at parse time.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

Monomial = tuple[tuple[str, int], ...]


class ExprError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} at column {pos + 1}")
        self.pos = pos


# ---------------------------------------------------------------------------
# generic sparse polynomial used during parsing

class _Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "_Poly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "_Poly":
        return cls({((name, 1),): Fraction(1)})

    def is_const(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __add__(self, other: "_Poly") -> "_Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return _Poly(out)

    def __neg__(self) -> "_Poly":
        return _Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "_Poly") -> "_Poly":
        return self + (-other)

    def __mul__(self, other: "_Poly") -> "_Poly":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = dict(m1)
                for v, e in m2:
                    exps[v] = exps.get(v, 0) + e
                m = tuple(sorted(exps.items()))
                out[m] = out.get(m, 0) + c1 * c2
        return _Poly(out)

    def __pow__(self, n: int) -> "_Poly":
        result = _Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        tok = m.group(m.lastindex)
        out.append((kind, "^" if tok == "**" else tok, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, params: Mapping[str, Fraction]):
        self.toks = _tokenize(text)
        self.i = 0
        self.params = params

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ExprError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> _Poly:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprError(f"unexpected {tok[1]!r}", tok[2])
        return p

    def expr(self) -> _Poly:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def _starts_factor(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("num", "name") or val == "("

    def term(self) -> _Poly:
        p = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in ("*", "/"):
                self.take()
                q = self.unary()
                if val == "*":
                    p = p * q
                else:
                    if not q.is_const() or q.const_value() == 0:
                        raise ExprError("division by a non-constant or zero expression", pos)
                    p = p * _Poly.const(1 / q.const_value())
            elif self._starts_factor():
                p = p * self.power()
            else:
                return p

    def unary(self) -> _Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if val == "-" else p
        return self.power()

    def power(self) -> _Poly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            e = self.unary()
            if not e.is_const():
                raise ExprError("exponent must be a constant", pos)
            n = e.const_value()
            if n.denominator != 1 or n < 0:
                raise ExprError("exponent must be a nonnegative integer", pos)
            return base ** int(n)
        return base

    def atom(self) -> _Poly:
        kind, val, pos = self.take()
        if kind == "num":
            return _Poly.const(Fraction(val))
        if kind == "name":
            if val == "T" and self.peek()[1] == "(":
                self.take("(")
                d = self.expr()
                self.take(",")
                arg = self.expr()
                self.take(")")
                if not d.is_const() or d.const_value().denominator != 1 or d.const_value() < 0:
                    raise ExprError("Chebyshev degree must be a nonnegative integer", pos)
                out = _Poly.const(0)
                for k, c in enumerate(chebyshev(int(d.const_value()))):
                    if c:
                        out = out + _Poly.const(c) * arg ** k
                return out
            if val in self.params:
                return _Poly.const(self.params[val])
            return _Poly.var(val)
        if val == "(":
            p = self.expr()
            self.take(")")
            return p
        raise ExprError(f"unexpected {val or 'end of input'!r}", pos)


def parse_expr(text: str, params: Mapping[str, object] | None = None) -> _Poly:
    ps = {k: Fraction(v) for k, v in (params or {}).items()}
    return _Parser(text, ps).parse()


# ---------------------------------------------------------------------------
# Chebyshev polynomials

@lru_cache(maxsize=None)
def chebyshev(d: int) -> tuple[int, ...]:
    """Integer coefficients of T_d, lowest degree first."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d == 0:
        return (1,)
    if d == 1:
        return (0, 1)
    a, b = chebyshev(d - 2), chebyshev(d - 1)
    out = [0] * (d + 1)
    for k, c in enumerate(b):
        out[k + 1] += 2 * c
    for k, c in enumerate(a):
        out[k] -= c
    return tuple(out)


# ---------------------------------------------------------------------------
# concrete polynomial types

@dataclass(frozen=True)
class UnivariatePoly:
    coeffs: tuple[Fraction, ...]   # lowest degree first, no trailing zeros

    @classmethod
    def from_coeffs(cls, coeffs) -> "UnivariatePoly":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    @classmethod
    def parse(cls, text: str, var: str = "t", params=None) -> "UnivariatePoly":
        p = parse_expr(text, params)
        extra = p.variables() - {var}
        if extra:
            raise ExprError(f"unexpected variables {sorted(extra)} in a polynomial in {var}")
        deg = max((dict(m).get(var, 0) for m in p.terms), default=0)
        cs = [Fraction(0)] * (deg + 1)
        for m, c in p.terms.items():
            cs[dict(m).get(var, 0)] += c
        return cls.from_coeffs(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_float(self, t):
        return np.polynomial.polynomial.polyval(t, [float(c) for c in self.coeffs] or [0.0])

    def deriv(self) -> "UnivariatePoly":
        return UnivariatePoly.from_coeffs([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return UnivariatePoly.from_coeffs([x + y for x, y in zip(a, b)])

    def __mul__(self, other):
        if not isinstance(other, UnivariatePoly):
            return UnivariatePoly.from_coeffs([c * Fraction(other) for c in self.coeffs])
        out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly.from_coeffs(out)

    def real_roots(self) -> list[float]:
        if self.degree < 1:
            return []
        roots = np.roots([float(c) for c in reversed(self.coeffs)])
        scale = max(1.0, float(np.max(np.abs(roots)))) if len(roots) else 1.0
        return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9 * scale)

    def __str__(self) -> str:
        return _format_terms([(c, ((("t", k),) if k else ())) for k, c in reversed(list(enumerate(self.coeffs)))])


def chebyshev_poly(d: int) -> UnivariatePoly:
    return UnivariatePoly.from_coeffs(chebyshev(d))


@dataclass(frozen=True)
class ParamCurve:
    x: UnivariatePoly
    y: UnivariatePoly
    interval: tuple[float, float] | None = None

    def __post_init__(self):
        if self.x.degree < 1 and self.y.degree < 1:
            raise ValueError("parametric curve is constant")

    @classmethod
    def parse(cls, x_text: str, y_text: str, params=None, interval=None) -> "ParamCurve":
        return cls(UnivariatePoly.parse(x_text, "t", params), UnivariatePoly.parse(y_text, "t", params), interval)

    def point(self, t):
        return self.x.eval_float(t), self.y.eval_float(t)

    def velocity(self, t):
        return self.x.deriv().eval_float(t), self.y.deriv().eval_float(t)


@dataclass(frozen=True)
class BivariatePoly:
    coeffs: tuple[tuple[tuple[int, int], Fraction], ...]   # sorted ((i, j), c) for c x^i y^j

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, int], object]) -> "BivariatePoly":
        items = tuple(sorted((k, Fraction(v)) for k, v in d.items() if Fraction(v) != 0))
        return cls(items)

    @classmethod
    def parse(cls, text: str, params=None) -> "BivariatePoly":
        p = parse_expr(text, params)
        extra = p.variables() - {"x", "y"}
        if extra:
            raise ExprError(f"unexpected variables {sorted(extra)}; supply them as parameters")
        out: dict[tuple[int, int], Fraction] = {}
        for m, c in p.terms.items():
            e = dict(m)
            key = (e.get("x", 0), e.get("y", 0))
            out[key] = out.get(key, 0) + c
        return cls.from_dict(out)

    @property
    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.coeffs)

    @property
    def degree(self) -> int:
        return max((i + j for (i, j), _ in self.coeffs), default=0)

    @property
    def scale(self) -> float:
        return max((abs(float(c)) for _, c in self.coeffs), default=0.0)

    def __call__(self, x, y):
        """Exact evaluation at rational (or any numeric) arguments."""
        return sum((c * x ** i * y ** j for (i, j), c in self.coeffs), Fraction(0))

    def eval_float(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (i, j), c in self.coeffs:
            out = out + float(c) * x ** i * y ** j
        return out

    def dx(self) -> "BivariatePoly":
        return BivariatePoly.from_dict({(i - 1, j): i * c for (i, j), c in self.coeffs if i})

    def dy(self) -> "BivariatePoly":
        return BivariatePoly.from_dict({(i, j - 1): j * c for (i, j), c in self.coeffs if j})

    def __str__(self) -> str:
        return _format_terms([(c, tuple(p for p in (("x", i), ("y", j)) if p[1]))
                              for (i, j), c in sorted(self.coeffs, key=lambda kv: (-(kv[0][0] + kv[0][1]), kv[0]))])


def _format_terms(terms) -> str:
    parts = []
    for c, mono in terms:
        if c == 0:
            continue
        body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
        mag = abs(c)
        cs = str(mag)
        if body:
            s = body if mag == 1 else f"{cs}*{body}"
        else:
            s = cs
        if not parts:
            parts.append(("-" if c < 0 else "") + s)
        else:
            parts.append(("- " if c < 0 else "+ ") + s)
    return " ".join(parts) if parts else "0"
