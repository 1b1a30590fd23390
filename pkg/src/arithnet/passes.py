"""Semantics-preserving network rewrites used on the way to compact sets.

Pipeline: :func:`eliminate_negations` -> :func:`pair_selections` ->
:func:`compactify` -> :func:`t_union`, plus :func:`fibered_product` for the
projection bound.  Surviving gates keep their ids; new gates get fresh ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .compile import ball_condition, bool_tree
from .errors import BadProjectionArity, NegationPresent, UnpairedSelection
from .formula import Schedule, check_thresholds
from .network import SIGN_RELS, Network, NetworkBuilder, prune

_SIGN_COMPLEMENT = {"lt": ("gt", "eq"), "eq": ("lt", "gt"), "gt": ("lt", "eq")}


def _complement(builder: NetworkBuilder, gid: int, memo: dict[int, int]) -> int:
    """Id of a Not-free gate computing the negation of builder gate ``gid``.

    Sign gates become an ``or`` of the two complementary sign gates on the same
    parent; ``and``/``or`` dualise.  Depth grows by at most one.  The builder's
    structural sharing reuses complement gates that already exist.
    """
    hit = memo.get(gid)
    if hit is not None:
        return hit
    g = builder.index[gid]
    if g.kind in SIGN_RELS:
        w = g.parents[0]
        r1, r2 = _SIGN_COMPLEMENT[g.kind]
        out = builder.or_(builder.sign(r1, w), builder.sign(r2, w))
    elif g.kind == "and":
        out = builder.or_(_complement(builder, g.parents[0], memo), _complement(builder, g.parents[1], memo))
    elif g.kind == "or":
        out = builder.and_(_complement(builder, g.parents[0], memo), _complement(builder, g.parents[1], memo))
    elif g.kind == "not":
        out = g.parents[0]
    else:
        raise ValueError(f"gate {gid} ({g.kind}) is not Boolean-typed")
    memo[gid] = out
    return out


def _require_no_not(net: Network, who: str) -> None:
    bad = [g.id for g in net.gates if g.kind == "not"]
    if bad:
        raise NegationPresent(f"{who} needs a network without not gates (found at gates {bad[:5]})")


def eliminate_negations(net: Network) -> Network:
    """Equivalent network without ``not`` gates and no greater depth.

    Each ``not`` gate is bypassed: its children are rewired to a Not-free
    complement of its parent.  Gates that end up outside the output's cone
    are removed.
    """
    net.check()
    builder = NetworkBuilder(net.input_arity, reserved=net.index)
    positive: dict[int, int] = {}
    memo: dict[int, int] = {}
    index = net.index
    for gid in net.order:
        g = index[gid]
        if g.kind == "not":
            positive[gid] = _complement(builder, positive[g.parents[0]], memo)
        else:
            positive[gid] = builder.place(gid, g.kind, [positive[p] for p in g.parents], g.arg)
    return builder.build(prune_unused=True)


@dataclass(frozen=True)
class SelectionPair:
    v: int  # sel(g, 0, A)
    v_prime: int  # sel(h, 0, A')
    guard: int  # A
    guard_prime: int  # A', complement of A
    sum_gate: int  # add(v, v'), carries the id of the replaced selection gate


@dataclass(frozen=True)
class PairedSelectionInfo:
    pairs: tuple[SelectionPair, ...]

    def to_text(self) -> str:
        lines = ["# v v' guard guard' sum"]
        lines += [f"{p.v} {p.v_prime} {p.guard} {p.guard_prime} {p.sum_gate}" for p in self.pairs]
        return "\n".join(lines) + "\n"


def pair_selections(net: Network) -> tuple[Network, PairedSelectionInfo]:
    """Replace each ``sel(g, h, A)`` by ``sel(g, 0, A) + sel(h, 0, A')``.

    ``A'`` is a Not-free complement of ``A``.  The output is conjoined with a
    dichotomy over the clauses ``A or A'``, which are identically true, so the
    accepted set is unchanged.
    """
    net.check()
    _require_no_not(net, "pair_selections")
    if not net.count("sel"):
        return prune(net), PairedSelectionInfo(())
    builder = NetworkBuilder(net.input_arity, reserved=net.index)
    memo: dict[int, int] = {}
    pairs: list[SelectionPair] = []
    clauses: list[int] = []
    index = net.index
    out_id = net.output_id
    for gid in net.order:
        g = index[gid]
        if g.kind == "sel":
            value_true, value_false, guard = g.parents
            zero = builder.const(0)
            guard_prime = _complement(builder, guard, memo)
            # fresh gates, never shared: each selection belongs to exactly one pair
            v = builder.place(builder.fresh_id(), "sel", (value_true, zero, guard))
            v_prime = builder.place(builder.fresh_id(), "sel", (value_false, zero, guard_prime))
            builder.place(gid, "add", (v, v_prime))
            pairs.append(SelectionPair(v, v_prime, guard, guard_prime, gid))
            clause = builder.or_(guard, guard_prime)
            if clause not in clauses:
                clauses.append(clause)
        elif gid == out_id:
            root = builder.and_(g.parents[0], bool_tree(builder, "and", clauses))
            builder.place(gid, "output", (root,))
        else:
            builder.place(gid, g.kind, g.parents, g.arg)
    return builder.build(prune_unused=True), PairedSelectionInfo(tuple(pairs))


def find_pairs(net: Network) -> PairedSelectionInfo:
    """Recover the selection pairing of a network in paired form.

    A pair is an ``add`` gate whose parents are two selection gates whose
    second (false-branch) input is the constant 0.  Every selection gate must
    belong to exactly one pair; complementarity of the guards is a semantic
    property and is not checked here.
    """
    index = net.index

    def zero_branch(gid: int) -> bool:
        g = index[gid]
        if g.kind != "sel":
            return False
        h = index[g.parents[1]]
        return h.kind == "const" and h.arg == 0

    used: set[int] = set()
    pairs: list[SelectionPair] = []
    for gid in net.order:
        g = index[gid]
        if g.kind != "add":
            continue
        a, b = g.parents
        if a == b or a in used or b in used or not (zero_branch(a) and zero_branch(b)):
            continue
        used.update((a, b))
        pairs.append(SelectionPair(a, b, index[a].parents[2], index[b].parents[2], gid))
    unpaired = [g.id for g in net.gates if g.kind == "sel" and g.id not in used]
    if unpaired:
        raise UnpairedSelection(f"selection gates {unpaired[:5]} are not in paired form")
    return PairedSelectionInfo(tuple(pairs))


def compactify(net: Network, delta, eps, add_ball: bool = True) -> Network:
    """Rewrite every sign gate into its delta-eps approximation.

    ``f>0`` becomes ``(f-delta>0) or (f-delta=0)``, ``f<0`` becomes
    ``(-delta-f>0) or (-delta-f=0)`` and ``f=0`` becomes
    ``(f^2-eps<0) or (f^2-eps=0)``; the ``or`` gate inherits the sign gate's
    id.  With ``add_ball`` the output also requires ``|x|^2 <= 1/delta``.
    """
    delta, eps = check_thresholds(delta, eps)
    net.check()
    _require_no_not(net, "compactify")
    find_pairs(net)
    builder = NetworkBuilder(net.input_arity, reserved=net.index)
    index = net.index
    out_id = net.output_id
    for gid in net.order:
        g = index[gid]
        if g.kind in SIGN_RELS:
            w = g.parents[0]
            if g.kind == "gt":
                t = builder.sub(w, builder.const(delta))
                parts = (builder.sign("gt", t), builder.sign("eq", t))
            elif g.kind == "lt":
                t = builder.sub(builder.const(-delta), w)
                parts = (builder.sign("gt", t), builder.sign("eq", t))
            else:
                t = builder.sub(builder.mul(w, w), builder.const(eps))
                parts = (builder.sign("lt", t), builder.sign("eq", t))
            builder.place(gid, "or", parts)
        elif gid == out_id:
            root = g.parents[0]
            if add_ball and net.input_arity > 0:
                root = builder.and_(root, ball_condition(builder, net.input_arity, delta))
            builder.place(gid, "output", (root,))
        else:
            builder.place(gid, g.kind, g.parents, g.arg)
    return builder.build()


def t_union_copies(net: Network, sched: Schedule, add_ball: bool = True) -> list[Network]:
    return [compactify(net, d, e, add_ball) for e, d in sched]


def t_union(net: Network, sched: Schedule, add_ball: bool = True) -> Network:
    """Or of ``compactify(net, delta_i, eps_i)`` over the schedule, inputs shared."""
    copies = t_union_copies(net, sched, add_ball)
    builder = NetworkBuilder(net.input_arity)
    roots = [builder.embed(copy)[1] for copy in copies]
    builder.output(bool_tree(builder, "or", roots))
    return builder.build()


def fibered_product(net_t: Network, r: int, copies: int) -> Network:
    """Conjunction of ``copies`` instances of ``net_t`` sharing the first ``n-r`` inputs.

    Inputs of the result: ``X_0..X_{n-r-1}`` followed by one block of ``r``
    variables per copy.  Copy ``i`` reads the shared block and its own block.
    """
    net_t.check()
    n = net_t.input_arity
    if not 0 <= r <= n:
        raise BadProjectionArity(f"r={r} outside [0, {n}]")
    if copies < 1:
        raise BadProjectionArity(f"copies must be at least 1, got {copies}")
    shared = n - r
    builder = NetworkBuilder(shared + copies * r)
    roots = []
    for i in range(copies):
        input_map = {k: k if k < shared else shared + i * r + (k - shared) for k in range(n)}
        roots.append(builder.embed(net_t, input_map)[1])
    builder.output(bool_tree(builder, "and", roots))
    return builder.build()


def fiber_block(point, n: int, r: int, i: int) -> list:
    """The ``n``-coordinate point read by copy ``i`` of a fibered product."""
    shared = n - r
    return list(point[:shared]) + list(point[shared + i * r: shared + (i + 1) * r])


def default_schedule_for(net: Network, base=Fraction(1, 4)) -> Schedule:
    """``schedule(n, base)``: the n+1 pairs used for an n-input network."""
    from .formula import schedule

    return schedule(net.input_arity, base)
