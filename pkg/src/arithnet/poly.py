"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

import gmpy2

from .errors import ArityMismatch, ParseError

Exps = tuple[int, ...]


def to_mpq(value) -> "gmpy2.mpq":
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    return gmpy2.mpq(value)


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables ``x0 .. x{n-1}``.

    ``terms`` maps exponent vectors to nonzero :class:`~fractions.Fraction`
    coefficients.  Equality is structural (same term map, same ``nvars``).
    """

    __slots__ = ("nvars", "terms", "_hash", "_compiled")

    def __init__(self, nvars: int, terms: Mapping[Exps, object] | None = None):
        clean: dict[Exps, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"exponent vector {exps} invalid for {nvars} variables")
            c = Fraction(coeff)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self.terms = clean
        self._hash = None
        self._compiled = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, value, nvars: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise ValueError(f"variable x{i} outside {nvars} variables")
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exps, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        p._compiled = None
        return p

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ArityMismatch(f"polynomials over {self.nvars} and {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return Polynomial._raw(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = Polynomial.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        """Terms in graded-lex order, highest degree first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # -- evaluation ---------------------------------------------------------

    def _program(self):
        if self._compiled is None:
            self._compiled = [
                (to_mpq(c), tuple((i, k) for i, k in enumerate(e) if k))
                for e, c in self.terms.items()
            ]
        return self._compiled

    def eval_mpq(self, point: Sequence) -> "gmpy2.mpq":
        """Evaluate at a point whose coordinates are already ``mpq``."""
        total = gmpy2.mpq(0)
        for c, mono in self._program():
            v = c
            for i, k in mono:
                v = v * (point[i] if k == 1 else point[i] ** k)
            total += v
        return total

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ArityMismatch(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        return to_fraction(self.eval_mpq([to_mpq(x) for x in point]))

    def extend(self, nvars: int) -> "Polynomial":
        """Same polynomial viewed in ``nvars >= self.nvars`` variables."""
        pad = (0,) * (nvars - self.nvars)
        return Polynomial._raw(nvars, {e + pad: c for e, c in self.terms.items()})

    def substitute_vars(self, mapping: Sequence[int], nvars: int) -> "Polynomial":
        """Rename variable ``i`` to ``mapping[i]`` in an ``nvars``-variable ring."""
        terms: dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                new[mapping[i]] += k
            new = tuple(new)
            terms[new] = terms.get(new, 0) + c
        return Polynomial(nvars, terms)

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out: list[str] = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(exps) if k)
            mag = abs(c)
            if not mono:
                body = _fmt(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt(mag)}*{mono}"
            if not out:
                out.append(f"-{body}" if c < 0 else body)
            else:
                out.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {str(self)!r})"


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# infix parser

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|x(\d+)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character in polynomial at {text[pos:]!r}")
        num, var, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif var is not None:
            tokens.append(("var", var))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _PolyParser:
    def __init__(self, text: str, nvars: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r} in polynomial, got {tok[1]!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input in polynomial at token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division only by a nonzero constant")
                p = p * Polynomial.const(1 / q.constant_value(), self.nvars)
        return p

    def unary(self) -> Polynomial:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            return base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            return Polynomial.const(int(val), self.nvars)
        if kind == "var":
            i = int(val)
            if i >= self.nvars:
                raise ParseError(f"variable x{i} not below nvars={self.nvars}")
            return Polynomial.var(i, self.nvars)
        if (kind, val) == ("op", "("):
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected token {val!r} in polynomial")


def max_var_index(text: str) -> int:
    """Largest ``x<k>`` index mentioned in ``text`` (-1 if none)."""
    return max((int(k) for k in re.findall(r"x(\d+)", text)), default=-1)


def parse_poly(text: str, nvars: int | None = None) -> Polynomial:
    """Parse an infix polynomial such as ``3/2*x0^2*x1 - x2 + 1``."""
    if nvars is None:
        nvars = max_var_index(text) + 1
    return _PolyParser(text, nvars).parse()


def variables_poly(nvars: int) -> list[Polynomial]:
    return [Polynomial.var(i, nvars) for i in range(nvars)]


def sum_of_squares(nvars: int) -> Polynomial:
    return sum((x * x for x in variables_poly(nvars)), Polynomial.const(0, nvars))
