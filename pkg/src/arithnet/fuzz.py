"""Random valid networks and formulas for differential testing."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import PieceBudgetExceeded
from .formula import Atom, Formula, conj, disj
from .network import Network, NetworkBuilder, network_depth
from .poly import Polynomial
from .semantics import denote

_CONSTS = [Fraction(v) for v in (-2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-3, 2), Fraction(1, 3)]


def random_network(rng: random.Random, max_inputs: int = 3, max_depth: int = 12,
                   max_gates: int = 40, max_degree: int = 6) -> Network:
    """A random valid network using every gate kind, ``not`` and ``sel`` included.

    Numeric gates track an upper bound on polynomial degree so denotations
    stay small; the output reads the deepest of the last few Boolean gates.
    """
    n = rng.randint(1, max_inputs)
    b = NetworkBuilder(n)
    numeric: list[int] = [b.input(i) for i in range(n)]
    degree = {g: 1 for g in numeric}
    if rng.random() < 0.7:
        c = b.const(rng.choice(_CONSTS))
        numeric.append(c)
        degree[c] = 0
    boolean: list[int] = [b.sign(rng.choice(("lt", "eq", "gt")), b.sub(numeric[0], b.const(rng.choice(_CONSTS))))]
    degree[b.index[boolean[0]].parents[0]] = 1
    numeric.append(b.index[boolean[0]].parents[0])

    def pick(pool: list[int]) -> int:
        # favour recent gates so that long chains form
        return pool[-1 - min(int(rng.expovariate(0.4)), len(pool) - 1)]

    def fits(*parents: int) -> bool:
        return max(b.depth_of(p) for p in parents) + 1 <= max_depth

    target = rng.randint(max_gates // 3, max_gates)
    attempts = 0
    while len(b.gates) < target and attempts < 10 * max_gates:
        attempts += 1
        roll = rng.random()
        if roll < 0.35:
            op = rng.choice(("add", "sub", "mul"))
            p, q = pick(numeric), rng.choice(numeric)
            deg = degree[p] + degree[q] if op == "mul" else max(degree[p], degree[q])
            if deg > max_degree or not fits(p, q):
                continue
            g = b.gate(op, p, q)
            degree[g] = deg
            numeric.append(g)
        elif roll < 0.52:
            p = pick(numeric)
            if not fits(p):
                continue
            boolean.append(b.sign(rng.choice(("lt", "eq", "gt")), p))
        elif roll < 0.66:
            op = rng.choice(("and", "or"))
            p, q = pick(boolean), rng.choice(boolean)
            if p == q or not fits(p, q):
                continue
            boolean.append(b.gate(op, p, q))
        elif roll < 0.74:
            p = pick(boolean)
            if b.index[p].kind == "not" or not fits(p):
                continue
            boolean.append(b.not_(p))
        else:
            p, q, guard = pick(numeric), rng.choice(numeric), pick(boolean)
            if p == q or not fits(p, q, guard):
                continue
            g = b.select(p, q, guard)
            degree[g] = max(degree[p], degree[q])
            numeric.append(g)
    root = max(boolean[-3:], key=b.depth_of)
    if b.depth_of(root) >= max_depth:
        root = min(boolean, key=b.depth_of)
    b.output(root)
    return b.build(prune_unused=True)


def network_corpus(count: int, seed: int = 0, piece_budget: int = 4096, **kwargs) -> list[Network]:
    """``count`` random networks whose denotation fits in ``piece_budget``."""
    rng = random.Random(seed)
    out: list[Network] = []
    while len(out) < count:
        net = random_network(rng, **kwargs)
        try:
            denote(net, piece_budget)
        except PieceBudgetExceeded:
            continue
        out.append(net)
    return out


def paired_corpus(count: int, seed: int = 0, piece_budget: int = 4096, **kwargs) -> list[tuple[Network, Network]]:
    """``count`` pairs ``(net, paired)`` where ``paired`` is the negation-free,
    selection-paired form of ``net`` and its denotation fits in ``piece_budget``."""
    from .passes import eliminate_negations, pair_selections

    rng = random.Random(seed)
    out: list[tuple[Network, Network]] = []
    while len(out) < count:
        net = random_network(rng, **kwargs)
        paired, _ = pair_selections(eliminate_negations(net))
        try:
            denote(paired, piece_budget)
        except PieceBudgetExceeded:
            continue
        out.append((net, paired))
    return out


def random_poly(rng: random.Random, nvars: int, max_terms: int = 3, max_degree: int = 2) -> Polynomial:
    p = Polynomial.const(rng.choice(_CONSTS), nvars)
    for _ in range(rng.randint(1, max_terms)):
        term = Polynomial.const(rng.choice(_CONSTS), nvars)
        for _ in range(rng.randint(1, max_degree)):
            term = term * Polynomial.var(rng.randrange(nvars), nvars)
        p = p + term
    return p


def random_formula(rng: random.Random, nvars: int, depth: int = 3, rels=("lt", "eq", "gt")) -> Formula:
    """Random negation-free formula with atoms drawn from ``rels``."""
    if depth == 0 or rng.random() < 0.3:
        p = random_poly(rng, nvars)
        if p.is_constant():
            p = p + Polynomial.var(0, nvars)
        return Atom(p, rng.choice(rels))
    parts = [random_formula(rng, nvars, depth - 1, rels) for _ in range(rng.randint(2, 3))]
    return conj(*parts) if rng.random() < 0.5 else disj(*parts)


def corpus_stats(nets: list[Network]) -> dict:
    return {
        "count": len(nets),
        "max_depth": max(network_depth(n) for n in nets),
        "with_not": sum(1 for n in nets if n.count("not")),
        "with_sel": sum(1 for n in nets if n.count("sel")),
    }
