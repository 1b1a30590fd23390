"""Differential equivalence, depth contracts, bound formulas and a b0 probe."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .compile import clog2
from .errors import ArityMismatch, EmptySample, UnknownKind
from .formula import Formula, eval_formula, formula_nvars
from .network import Network, network_depth
from .sampling import sample_points
from .semantics import compiled


@dataclass(frozen=True)
class EquivReport:
    samples_tested: int
    counterexample: tuple[Fraction, ...] | None
    seed: int

    @property
    def equivalent(self) -> bool:
        return self.counterexample is None

    def to_text(self) -> str:
        cex = "none" if self.counterexample is None else ",".join(str(v) for v in self.counterexample)
        return f"samples={self.samples_tested} seed={self.seed} counterexample={cex}"


def equivalent_on_samples(a: Network, b: Network, nsamples: int = 1000, seed: int = 0, box=4) -> EquivReport:
    """Compare accept decisions of ``a`` and ``b`` on seeded samples in ``[-box, box]^n``.

    Stops at the first disagreement.  This falsifies equivalence; it never
    proves it.
    """
    if a.input_arity != b.input_arity:
        raise ArityMismatch(f"input arities differ: {a.input_arity} vs {b.input_arity}")
    pa, pb = compiled(a), compiled(b)
    tested = 0
    for x in sample_points(a.input_arity, nsamples, seed, box):
        tested += 1
        if pa.accepts(x) != pb.accepts(x):
            return EquivReport(tested, tuple(x), seed)
    return EquivReport(tested, None, seed)


def formula_agrees(net: Network, f: Formula, nsamples: int = 1000, seed: int = 0, box=4):
    """First sampled point where ``net`` and ``f`` disagree, or None."""
    prog = compiled(net)
    for x in sample_points(net.input_arity, nsamples, seed, box):
        if prog.accepts(x) != eval_formula(f, x):
            return tuple(x)
    return None


# ---------------------------------------------------------------------------
# bound formulas (log base 2, constants c1, c2 free)


@dataclass(frozen=True)
class BoundInputs:
    betti_total: int
    n: int
    c1: Fraction = Fraction(1)
    c2: Fraction = Fraction(1)

    def __post_init__(self):
        if self.betti_total < 1:
            raise ValueError(f"betti_total must be at least 1, got {self.betti_total}")
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if Fraction(self.c1) <= 0 or Fraction(self.c2) < 0:
            raise ValueError("need c1 > 0 and c2 >= 0")


def _log2(b: int) -> float:
    # exact for powers of two, which keeps the closed-form examples exact
    if b & (b - 1) == 0:
        return float(b.bit_length() - 1)
    return math.log2(b)


def lower_bound_general(betti_total: int, n: int, c1=1, c2=1) -> float:
    """``c1 * sqrt(log2(b) / n) - c2 * log2(n)``."""
    inp = BoundInputs(betti_total, n, Fraction(c1), Fraction(c2))
    return float(inp.c1) * math.sqrt(_log2(inp.betti_total) / inp.n) - float(inp.c2) * _log2(inp.n)


def lower_bound_projection(betti_total: int, n: int, c1=1, c2=1) -> float:
    """``c1 * sqrt(log2(b)) / n - c2 * log2(n)``."""
    inp = BoundInputs(betti_total, n, Fraction(c1), Fraction(c2))
    return float(inp.c1) * math.sqrt(_log2(inp.betti_total)) / inp.n - float(inp.c2) * _log2(inp.n)


# ---------------------------------------------------------------------------
# depth contracts

PASS_KINDS = ("neg-elim", "pair-sel", "compactify", "t-union", "fiber")


@dataclass(frozen=True)
class ContractResult:
    kind: str
    depth_before: int
    depth_after: int
    limit: int

    @property
    def ok(self) -> bool:
        return self.depth_after <= self.limit

    def __bool__(self) -> bool:
        return self.ok

    def to_text(self) -> str:
        verdict = "pass" if self.ok else "fail"
        return f"contract={self.kind} before={self.depth_before} after={self.depth_after} limit={self.limit} {verdict}"


def contract_limit(kind: str, d_before: int, **params) -> int:
    """Largest depth the pass ``kind`` may produce from a depth-``d_before`` network.

    Parameters: ``nsel`` for pair-sel, ``n`` for compactify, ``copies`` for
    t-union and fiber (for t-union ``d_before`` is the deepest copy).
    """
    if kind == "neg-elim":
        return d_before
    if kind == "pair-sel":
        return d_before + 2 * clog2(1 + params["nsel"]) + 6
    if kind == "compactify":
        return 3 * d_before + clog2(max(1, params["n"])) + 10
    if kind in ("t-union", "fiber"):
        return d_before + clog2(params["copies"])
    raise UnknownKind(f"unknown pass kind {kind!r}; expected one of {', '.join(PASS_KINDS)}")


def contract_holds(kind: str, d_before: int, d_after: int, **params) -> ContractResult:
    return ContractResult(kind, d_before, d_after, contract_limit(kind, d_before, **params))


def check_depth_contract(before: Network, after: Network, kind: str, **params) -> ContractResult:
    """Check the depth inequality of pass ``kind`` on actual networks.

    ``nsel`` and ``n`` are read off ``before`` when not given.  For
    ``t-union`` pass ``copies`` as the list of per-copy networks (or give
    ``copy_depth`` and ``copies`` as numbers).
    """
    d_before = network_depth(before)
    d_after = network_depth(after)
    if kind == "pair-sel":
        params.setdefault("nsel", before.count("sel"))
    elif kind == "compactify":
        params.setdefault("n", before.input_arity)
    elif kind == "t-union":
        copies = params["copies"]
        if not isinstance(copies, int):
            params["copies"] = len(copies)
            d_before = max(network_depth(c) for c in copies)
        elif "copy_depth" in params:
            d_before = params.pop("copy_depth")
    return contract_holds(kind, d_before, d_after, **params)


# ---------------------------------------------------------------------------
# connected components of a sampled point cloud


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, a) -> None:
        self.parent.setdefault(a, a)

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def components(self) -> int:
        return sum(1 for a in self.parent if self.find(a) == a)


def grid_axis(box, resolution: int) -> list[Fraction]:
    """``resolution`` equally spaced points covering ``[-box, box]`` inclusive."""
    box = Fraction(box)
    step = 2 * box / (resolution - 1)
    return [-box + i * step for i in range(resolution)]


def betti0_estimate(f: Formula, box, resolution: int, nvars: int | None = None) -> int:
    """Number of components of the grid points satisfying ``f``.

    Grid points are joined when they differ by one step along a single axis.
    An estimate: thin or nearly touching pieces can be merged or split.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    n = formula_nvars(f) if nvars is None else nvars
    if n is None:
        raise ValueError("cannot infer the number of variables; pass nvars")
    axis = grid_axis(box, resolution)
    uf = _UnionFind()
    for idx in itertools.product(range(resolution), repeat=n):
        if eval_formula(f, [axis[i] for i in idx]):
            uf.add(idx)
    if not uf.parent:
        raise EmptySample("no grid point satisfies the formula")
    for idx in uf.parent:
        for k in range(n):
            nb = idx[:k] + (idx[k] + 1,) + idx[k + 1:]
            if nb in uf.parent:
                uf.union(idx, nb)
    return uf.components()


def betti0_probe(f: Formula, sched, box, resolution: int, nvars: int | None = None) -> tuple[int, int]:
    """``(b0 estimate of f, b0 estimate of its union of approximations)``."""
    from .formula import t_union_formula

    n = formula_nvars(f) if nvars is None else nvars
    before = betti0_estimate(f, box, resolution, n)
    after = betti0_estimate(t_union_formula(f, sched, add_ball=True, nvars=n), box, resolution, n)
    return before, after

