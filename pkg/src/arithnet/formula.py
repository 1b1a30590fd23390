"""Quantifier-free formulas over polynomial sign conditions.

Formula nodes are hash-consed: building the same node twice returns the same
object, so structural equality is identity and shared subformulas are stored
once.  All traversals memoise on node identity, which keeps work linear in the
size of the formula DAG rather than its tree expansion.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence


from .errors import ArityMismatch, BadBase, BadThresholds, FormulaError, NegationPresent, ParseError
from .poly import Polynomial, max_var_index, parse_poly, sum_of_squares, to_mpq

RELS = ("lt", "le", "eq", "ge", "gt")
STRICT_RELS = ("lt", "eq", "gt")

_REL_TEST: dict[str, Callable[[object], bool]] = {
    "lt": lambda v: v < 0,
    "le": lambda v: v <= 0,
    "eq": lambda v: v == 0,
    "ge": lambda v: v >= 0,
    "gt": lambda v: v > 0,
}


class Formula:
    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self) -> str:
        return to_sexpr(self)


class Const(Formula):
    __slots__ = ("value",)

    def __new__(cls, value: bool):
        return TRUE if value else FALSE

    def __repr__(self) -> str:
        return "TRUE" if self.value else "FALSE"

    def __reduce__(self):
        return (Const, (self.value,))


TRUE = object.__new__(Const)
TRUE.value = True
FALSE = object.__new__(Const)
FALSE.value = False


class Atom(Formula):
    """``poly rel 0`` for ``rel`` in lt, le, eq, ge, gt."""

    __slots__ = ("poly", "rel", "__weakref__")
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, poly: Polynomial, rel: str):
        if rel not in RELS:
            raise FormulaError(f"unknown relation {rel!r}")
        key = (poly, rel)
        obj = cls._table.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.poly = poly
            obj.rel = rel
            cls._table[key] = obj
        return obj

    def __repr__(self) -> str:
        return f"Atom({str(self.poly)!r}, {self.rel!r})"


class _Nary(Formula):
    __slots__ = ("args", "__weakref__")

    def __new__(cls, *args: Formula):
        if len(args) < 2:
            raise FormulaError(f"{cls.__name__} needs at least two operands")
        key = tuple(map(id, args))
        table = cls._table
        obj = table.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.args = tuple(args)
            table[key] = obj
        return obj

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.args!r}"


class And(_Nary):
    __slots__ = ()
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()


class Or(_Nary):
    __slots__ = ()
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()


class Not(Formula):
    __slots__ = ("arg", "__weakref__")
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, arg: Formula):
        obj = cls._table.get(id(arg))
        if obj is None:
            obj = object.__new__(cls)
            obj.arg = arg
            cls._table[id(arg)] = obj
        return obj

    def __repr__(self) -> str:
        return f"Not({self.arg!r})"


# ---------------------------------------------------------------------------
# smart constructors


def atom(poly: Polynomial, rel: str) -> Atom:
    return Atom(poly, rel)


def conj(*fs: Formula) -> Formula:
    """Conjunction, dropping TRUE operands and collapsing on FALSE."""
    kept = []
    for f in fs:
        if f is FALSE:
            return FALSE
        if f is not TRUE and f not in kept:
            kept.append(f)
    if not kept:
        return TRUE
    if len(kept) == 1:
        return kept[0]
    return And(*kept)


def disj(*fs: Formula) -> Formula:
    """Disjunction, dropping FALSE operands and collapsing on TRUE."""
    kept = []
    for f in fs:
        if f is TRUE:
            return TRUE
        if f is not FALSE and f not in kept:
            kept.append(f)
    if not kept:
        return FALSE
    if len(kept) == 1:
        return kept[0]
    return Or(*kept)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, _Nary):
        return f.args
    if isinstance(f, Not):
        return (f.arg,)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    """Every distinct node of the DAG, each once."""
    seen: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(children(node))


def atoms(f: Formula) -> list[Atom]:
    return [n for n in walk(f) if isinstance(n, Atom)]


def has_not(f: Formula) -> bool:
    return any(isinstance(n, Not) for n in walk(f))


def dag_size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def formula_nvars(f: Formula) -> int | None:
    """Number of variables of the atoms, or None for an atom-free formula."""
    counts = {a.poly.nvars for a in atoms(f)}
    if len(counts) > 1:
        raise FormulaError(f"atoms disagree on the number of variables: {sorted(counts)}")
    return counts.pop() if counts else None


# ---------------------------------------------------------------------------
# evaluation


def eval_formula(f: Formula, x: Sequence) -> bool:
    """Exact truth value of ``f`` at the rational point ``x``."""
    point = [to_mpq(v) for v in x]
    return _Evaluator(point).run(f)


class _Evaluator:
    __slots__ = ("point", "memo", "values")

    def __init__(self, point):
        self.point = point
        self.memo: dict[int, bool] = {}
        self.values: dict[Polynomial, object] = {}

    def run(self, f: Formula) -> bool:
        memo = self.memo
        key = id(f)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            v = self.values.get(f.poly)
            if v is None:
                if f.poly.nvars != len(self.point):
                    raise ArityMismatch(
                        f"point has {len(self.point)} coordinates, atom has {f.poly.nvars} variables")
                v = self.values[f.poly] = f.poly.eval_mpq(self.point)
            result = _REL_TEST[f.rel](v)
        elif isinstance(f, And):
            result = all(self.run(a) for a in f.args)
        elif isinstance(f, Or):
            result = any(self.run(a) for a in f.args)
        elif isinstance(f, Not):
            result = not self.run(f.arg)
        else:
            result = f.value
        memo[key] = result
        return result


# ---------------------------------------------------------------------------
# negation normal form

# complement of each relation as a disjunction of relations
_COMPLEMENT = {
    "gt": ("lt", "eq"),
    "eq": ("lt", "gt"),
    "lt": ("gt", "eq"),
    "le": ("gt",),
    "ge": ("lt",),
}

_negations: "weakref.WeakKeyDictionary[Formula, Formula]" = weakref.WeakKeyDictionary()
_positives: "weakref.WeakKeyDictionary[Formula, Formula]" = weakref.WeakKeyDictionary()


def negate_nnf(f: Formula) -> Formula:
    """A Not-free formula equivalent to the negation of ``f``."""
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    hit = _negations.get(f)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        out = disj(*(Atom(f.poly, r) for r in _COMPLEMENT[f.rel]))
    elif isinstance(f, And):
        out = disj(*(negate_nnf(a) for a in f.args))
    elif isinstance(f, Or):
        out = conj(*(negate_nnf(a) for a in f.args))
    else:
        out = to_nnf(f.arg)
    _negations[f] = out
    return out


def to_nnf(f: Formula) -> Formula:
    """A Not-free formula equivalent to ``f``."""
    if isinstance(f, (Atom, Const)):
        return f
    hit = _positives.get(f)
    if hit is not None:
        return hit
    if isinstance(f, And):
        out = conj(*(to_nnf(a) for a in f.args))
    elif isinstance(f, Or):
        out = disj(*(to_nnf(a) for a in f.args))
    else:
        out = negate_nnf(f.arg)
    _positives[f] = out
    return out


# ---------------------------------------------------------------------------
# delta-epsilon approximation


def check_thresholds(delta, eps) -> tuple[Fraction, Fraction]:
    delta, eps = Fraction(delta), Fraction(eps)
    if not 0 < eps < delta < 1:
        raise BadThresholds(f"need 0 < eps < delta < 1, got eps={eps}, delta={delta}")
    return delta, eps


def ball_atom(nvars: int, delta) -> Atom:
    """``x0^2 + ... + x{n-1}^2 <= 1/delta``."""
    return Atom(sum_of_squares(nvars) - Fraction(1) / Fraction(delta), "le")


def approximate(f: Formula, delta, eps, add_ball: bool = False, nvars: int | None = None) -> Formula:
    """Replace ``h>0``, ``h<0``, ``h=0`` by ``h>=delta``, ``h<=-delta``, ``h^2<=eps``.

    With ``add_ball`` the result is conjoined with ``|x|^2 <= 1/delta``.
    ``nvars`` is only needed for the ball when ``f`` has no atoms.
    """
    delta, eps = check_thresholds(delta, eps)
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Atom):
            h = node.poly
            if node.rel == "gt":
                out = Atom(h - delta, "ge")
            elif node.rel == "lt":
                out = Atom(h + delta, "le")
            elif node.rel == "eq":
                out = Atom(h * h - eps, "le")
            else:
                raise FormulaError(f"non-strict atom ({node.rel} {h}) cannot be approximated")
        elif isinstance(node, And):
            out = conj(*(go(a) for a in node.args))
        elif isinstance(node, Or):
            out = disj(*(go(a) for a in node.args))
        elif isinstance(node, Not):
            raise NegationPresent("approximate needs a negation-free formula; apply negate_nnf/to_nnf first")
        else:
            out = node
        memo[id(node)] = out
        return out

    out = go(f)
    if add_ball:
        n = formula_nvars(f) if nvars is None else nvars
        if n is None:
            raise FormulaError("cannot add the ball condition without knowing nvars")
        out = conj(out, ball_atom(n, delta))
    return out


@dataclass(frozen=True)
class Schedule:
    """Chain ``eps_0 < delta_0 < eps_1 < ... < eps_m < delta_m < 1``.

    ``pairs[i]`` is ``(eps_i, delta_i)``.
    """

    pairs: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pairs = tuple((Fraction(e), Fraction(d)) for e, d in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise BadThresholds("schedule needs at least one (eps, delta) pair")
        chain = [v for pair in pairs for v in pair]
        if not (0 < chain[0] and all(a < b for a, b in zip(chain, chain[1:])) and chain[-1] < 1):
            raise BadThresholds(f"schedule is not a strictly increasing chain in (0, 1): {chain}")

    @property
    def m(self) -> int:
        return len(self.pairs) - 1

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __str__(self) -> str:
        return ", ".join(f"(eps={e}, delta={d})" for e, d in self.pairs)


def schedule(m: int, base=Fraction(1, 4)) -> Schedule:
    """Squaring chain with ``delta_m = base``: each element is the square of its successor."""
    base = Fraction(base)
    if not 0 < base < 1:
        raise BadBase(f"base must lie in (0, 1), got {base}")
    if m < 0:
        raise BadBase(f"m must be nonnegative, got {m}")
    chain = [base]
    for _ in range(2 * m + 1):
        chain.append(chain[-1] ** 2)
    chain.reverse()  # eps_0, delta_0, ..., eps_m, delta_m
    return Schedule(tuple((chain[2 * i], chain[2 * i + 1]) for i in range(m + 1)))


def t_union_formula(f: Formula, sched: Schedule, add_ball: bool = False, nvars: int | None = None) -> Formula:
    """Disjunction of :func:`approximate` over every (eps, delta) in ``sched``."""
    return disj(*(approximate(f, d, e, add_ball, nvars) for e, d in sched))


# ---------------------------------------------------------------------------
# S-expression text format


def to_sexpr(f: Formula) -> str:
    memo: dict[int, str] = {}

    def go(node: Formula) -> str:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Atom):
            out = f"({node.rel} {node.poly})"
        elif isinstance(node, And):
            out = "(and " + " ".join(go(a) for a in node.args) + ")"
        elif isinstance(node, Or):
            out = "(or " + " ".join(go(a) for a in node.args) + ")"
        elif isinstance(node, Not):
            out = f"(not {go(node.arg)})"
        else:
            out = "true" if node.value else "false"
        memo[id(node)] = out
        return out

    return go(f)


class _SexprParser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.pos = 0
        self.nvars = nvars

    def line(self) -> int:
        return self.text.count("\n", 0, self.pos) + 1

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.line())

    def skip(self):
        text = self.text
        while self.pos < len(text):
            c = text[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == ";":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self.pos += 1
            else:
                break

    def symbol(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace() and self.text[self.pos] not in "();":
            self.pos += 1
        return self.text[start:self.pos]

    def parse(self) -> Formula:
        f = self.formula()
        self.skip()
        if self.pos != len(self.text):
            raise self.error(f"trailing text {self.text[self.pos:self.pos + 20]!r}")
        return f

    def formula(self) -> Formula:
        self.skip()
        if self.pos >= len(self.text):
            raise self.error("unexpected end of formula")
        if self.text[self.pos] != "(":
            sym = self.symbol()
            if sym == "true":
                return TRUE
            if sym == "false":
                return FALSE
            raise self.error(f"unexpected symbol {sym!r}")
        self.pos += 1
        self.skip()
        head = self.symbol()
        if head in RELS:
            return Atom(self.poly_body(), head)
        if head in ("and", "or", "not"):
            args = []
            while True:
                self.skip()
                if self.pos >= len(self.text):
                    raise self.error(f"unclosed ({head} ...)")
                if self.text[self.pos] == ")":
                    self.pos += 1
                    break
                args.append(self.formula())
            if head == "not":
                if len(args) != 1:
                    raise self.error("(not ...) takes exactly one operand")
                return Not(args[0])
            if not args:
                return TRUE if head == "and" else FALSE
            if len(args) == 1:
                return args[0]
            return (And if head == "and" else Or)(*args)
        raise self.error(f"unknown head {head!r}")

    def poly_body(self) -> Polynomial:
        start = self.pos
        depth = 0
        text = self.text
        while self.pos < len(text):
            c = text[self.pos]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    break
                depth -= 1
            self.pos += 1
        if self.pos >= len(text):
            raise self.error("unclosed atom")
        body = text[start:self.pos]
        self.pos += 1
        try:
            return parse_poly(body, self.nvars)
        except ParseError as exc:
            raise self.error(str(exc)) from None


def parse_formula(text: str, nvars: int | None = None) -> Formula:
    """Parse the S-expression format, e.g. ``(or (gt x0) (le x0^2 + x1^2 - 1))``.

    Without ``nvars`` the variable count is one more than the largest index used.
    """
    body = "\n".join(line.split(";", 1)[0] for line in text.splitlines())
    if nvars is None:
        nvars = max_var_index(body) + 1
    return _SexprParser(text, nvars).parse()


def relabel(f: Formula, mapping: Sequence[int], nvars: int) -> Formula:
    """Rename variable ``i`` to ``mapping[i]`` in an ``nvars``-variable ring."""
    memo: dict[int, Formula] = {}

    def go(node):
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Atom):
            out = Atom(node.poly.substitute_vars(mapping, nvars), node.rel)
        elif isinstance(node, And):
            out = conj(*(go(a) for a in node.args))
        elif isinstance(node, Or):
            out = disj(*(go(a) for a in node.args))
        elif isinstance(node, Not):
            out = Not(go(node.arg))
        else:
            out = node
        memo[id(node)] = out
        return out

    return go(f)
