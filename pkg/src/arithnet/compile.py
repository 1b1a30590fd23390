"""Formula-to-network compilation with logarithmic-depth building blocks.

Every builder function takes a :class:`~arithnet.network.NetworkBuilder`,
adds gates to it and returns the id of the fragment's root gate.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction
from typing import Sequence

from .errors import FormulaError, NegationPresent
from .formula import And, Atom, Const, Formula, Not, Or, formula_nvars, walk
from .network import Network, NetworkBuilder
from .poly import Polynomial


def clog2(k: int) -> int:
    """Ceiling of log2 for k >= 1 (0 for k <= 1)."""
    return 0 if k <= 1 else (k - 1).bit_length()


def combine(builder: NetworkBuilder, op: str, items: Sequence[int]) -> int:
    """Fold ``items`` with binary ``op`` as a depth-aware balanced tree.

    Repeatedly joins the two shallowest operands, so the root sits at most
    ``ceil(log2(len(items)))`` levels above the deepest operand, and exactly
    that many when all operands have equal depth.
    """
    if not items:
        raise ValueError("cannot fold an empty operand list")
    counter = itertools.count()
    heap = [(builder.depth_of(g), next(counter), g) for g in items]
    heapq.heapify(heap)
    while len(heap) > 1:
        _, _, a = heapq.heappop(heap)
        _, _, b = heapq.heappop(heap)
        g = builder.gate(op, a, b)
        heapq.heappush(heap, (builder.depth_of(g), next(counter), g))
    return heap[0][2]


def bool_tree(builder: NetworkBuilder, op: str, leaves: Sequence[int]) -> int:
    """Dichotomy over Boolean-typed ``leaves`` with ``op`` in {and, or}."""
    if op not in ("and", "or"):
        raise ValueError(f"bool_tree op must be 'and' or 'or', got {op!r}")
    return combine(builder, op, leaves)


def _power(builder: NetworkBuilder, x: int, k: int) -> int:
    if k == 1:
        return x
    # structural sharing in the builder makes the halves reuse one another
    return builder.mul(_power(builder, x, (k + 1) // 2), _power(builder, x, k // 2))


def slp_for_poly(builder: NetworkBuilder, p: Polynomial) -> int:
    """Balanced straight-line program computing ``p`` from the input gates."""
    if p.is_zero():
        return builder.const(0)
    roots = []
    for exps, coeff in p.sorted_terms():
        factors = [_power(builder, builder.input(i), k) for i, k in enumerate(exps) if k]
        if not factors:
            roots.append(builder.const(coeff))
            continue
        mono = combine(builder, "mul", factors)
        if coeff != 1:
            mono = builder.mul(builder.const(coeff), mono)
        roots.append(mono)
    return combine(builder, "add", roots)


def slp_depth_bound(p: Polynomial) -> int:
    """Depth guaranteed for :func:`slp_for_poly`'s root."""
    per_term = max(
        (clog2(1 + sum(e)) + clog2(1 + sum(1 for k in e if k)) for e in p.terms),
        default=0)
    return clog2(max(1, len(p.terms))) + per_term + 2


def ball_condition(builder: NetworkBuilder, n: int, delta) -> int:
    """Boolean root accepting iff ``x0^2 + ... + x{n-1}^2 <= 1/delta``."""
    if n < 1:
        raise ValueError("ball condition needs at least one variable")
    squares = [builder.mul(builder.input(i), builder.input(i)) for i in range(n)]
    total = combine(builder, "add", squares)
    slack = builder.sub(builder.const(Fraction(1) / Fraction(delta)), total)
    return builder.or_(builder.sign("gt", slack), builder.sign("eq", slack))


def _relation(builder: NetworkBuilder, rel: str, root: int) -> int:
    if rel in ("lt", "eq", "gt"):
        return builder.sign(rel, root)
    strict = "lt" if rel == "le" else "gt"
    return builder.or_(builder.sign(strict, root), builder.sign("eq", root))


def compile_into(builder: NetworkBuilder, f: Formula) -> int:
    """Add gates deciding the negation-free formula ``f``; return the Boolean root."""
    memo: dict[int, int] = {}
    slps: dict[Polynomial, int] = {}

    def go(node: Formula) -> int:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Atom):
            root = slps.get(node.poly)
            if root is None:
                root = slps[node.poly] = slp_for_poly(builder, node.poly)
            out = _relation(builder, node.rel, root)
        elif isinstance(node, And):
            out = bool_tree(builder, "and", [go(a) for a in node.args])
        elif isinstance(node, Or):
            out = bool_tree(builder, "or", [go(a) for a in node.args])
        elif isinstance(node, Const):
            zero = builder.const(0)
            out = builder.sign("eq" if node.value else "gt", zero)
        else:
            raise NegationPresent("compile_formula needs a negation-free formula")
        memo[id(node)] = out
        return out

    return go(f)


def compile_formula(f: Formula, nvars: int | None = None) -> Network:
    """Network accepting exactly the points satisfying ``f``.

    Each atom's polynomial gets a balanced straight-line program feeding a
    sign gate (two sign gates and an ``or`` for ``le``/``ge``); the Boolean
    structure of ``f`` is mirrored with dichotomy trees.  No ``not`` or
    ``sel`` gates are emitted.
    """
    if any(isinstance(node, Not) for node in walk(f)):
        raise NegationPresent("compile_formula needs a negation-free formula")
    found = formula_nvars(f)
    if nvars is None:
        nvars = 0 if found is None else found
    elif found is not None and found != nvars:
        raise FormulaError(f"formula has {found} variables, nvars={nvars} requested")
    builder = NetworkBuilder(nvars)
    root = compile_into(builder, f)
    builder.output(root)
    return builder.build()


def formula_bool_depth(f: Formula) -> int:
    """Boolean depth of ``f`` counting ``le``/``ge`` atoms as one level."""
    memo: dict[int, int] = {}

    def go(node):
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Atom):
            out = 1 if node.rel in ("le", "ge") else 0
        elif isinstance(node, (And, Or)):
            out = max(go(a) for a in node.args) + clog2(len(node.args))
        else:
            out = 0
        memo[id(node)] = out
        return out

    return go(f)


def compile_depth_bound(f: Formula) -> int:
    slp = max((slp_depth_bound(a.poly) for a in walk(f) if isinstance(a, Atom)), default=0)
    return slp + 2 + formula_bool_depth(f)
