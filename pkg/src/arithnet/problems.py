"""Parity-of-integers membership: oracle, logarithmic-depth network, bound demo.

A point ``x`` in ``[1, n]^3`` is a member when all three coordinates are
integers or exactly one of them is.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

from .analysis import lower_bound_general
from .compile import bool_tree, combine
from .network import Network, NetworkBuilder, network_depth


def parity_oracle(x: Sequence, n: int) -> bool:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    xs = [Fraction(v) for v in x]
    if len(xs) != 3:
        raise ValueError(f"expected a triple, got {len(xs)} coordinates")
    if not all(1 <= v <= n for v in xs):
        return False
    integers = sum(1 for v in xs if v.denominator == 1)
    return integers in (1, 3)


def _nonnegative(b: NetworkBuilder, w: int) -> int:
    return b.or_(b.sign("gt", w), b.sign("eq", w))


def parity_network(n: int) -> Network:
    """Three-input network deciding :func:`parity_oracle` in depth O(log n).

    Per coordinate: an ``or``-tree over the tests ``x_i - j = 0`` for
    ``j = 1..n`` and the range test ``1 <= x_i <= n``; a selection turns the
    integrality bit into 0 (integer) or 1 (not integer).  The three bits are
    summed and the network accepts iff the sum is 0 or 2 and every range test
    passes.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    b = NetworkBuilder(3)
    zero, one = b.const(0), b.const(1)
    bits, ranges = [], []
    for i in range(3):
        x = b.input(i)
        hits = [b.sign("eq", b.sub(x, b.const(j))) for j in range(1, n + 1)]
        integral = bool_tree(b, "or", hits)
        bits.append(b.select(zero, one, integral))
        ranges.append(_nonnegative(b, b.sub(x, one)))
        ranges.append(_nonnegative(b, b.sub(b.const(n), x)))
    total = combine(b, "add", bits)
    verdict = b.or_(b.sign("eq", total), b.sign("eq", b.sub(total, b.const(2))))
    b.output(bool_tree(b, "and", [verdict] + ranges))
    return b.build()


def parity_depth_limit(n: int) -> float:
    return 12 * math.log2(n) + 40


class ParityBound(NamedTuple):
    lower: float
    upper_depth: int


def parity_bound_demo(n: int, c1=1, c2=1) -> ParityBound:
    """Lower bound for ``b = n^3`` (constant 1 assumed) and measured network depth."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    return ParityBound(lower_bound_general(n ** 3, 3, c1, c2), network_depth(parity_network(n)))
