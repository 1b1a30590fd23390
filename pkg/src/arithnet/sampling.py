"""Seeded rational sample generation for differential testing."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator

OFFSETS = (Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 1000), Fraction(-1, 1000))


def lattice_points(n: int, box) -> Iterator[tuple[Fraction, ...]]:
    """All integer points of ``[-box, box]^n``."""
    k = int(Fraction(box))
    axis = [Fraction(v) for v in range(-k, k + 1)]
    return itertools.product(axis, repeat=n)


def random_rational(rng: random.Random, box, max_den: int = 64) -> Fraction:
    """Uniform numerator over a denominator drawn from ``1..max_den``, clipped to the box."""
    box = Fraction(box)
    den = rng.randint(1, max_den)
    bound = int(box * den)
    return Fraction(rng.randint(-bound, bound), den)


def sample_points(n: int, count: int, seed: int = 0, box=4, max_den: int = 64) -> list[tuple[Fraction, ...]]:
    """Deterministic mix of lattice points, near-lattice offsets and random rationals.

    Up to a third of the budget goes to lattice points (all of them when the
    box is small enough), another third to lattice points shifted by
    ``+-1/2`` or ``+-1/1000`` per coordinate, and the rest to random
    bounded rationals.
    """
    if count <= 0:
        return []
    rng = random.Random(seed)
    if n == 0:
        return [()]
    k = int(Fraction(box))
    share = max(1, count // 3)
    if (2 * k + 1) ** n <= share:
        points = list(lattice_points(n, box))
    else:
        points = [tuple(Fraction(rng.randint(-k, k)) for _ in range(n)) for _ in range(share)]
    points = points[:count]
    while len(points) < min(count, 2 * share):
        points.append(tuple(Fraction(rng.randint(-k, k)) + rng.choice(OFFSETS) for _ in range(n)))
    while len(points) < count:
        points.append(tuple(random_rational(rng, box, max_den) for _ in range(n)))
    return points
