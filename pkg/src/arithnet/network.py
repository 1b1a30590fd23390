"""Decision arithmetic networks: the gate DAG, well-formedness and depth.

A network is an acyclic graph of typed gates.  Indegree-0 gates are inputs
and rational constants; sign gates (``lt``/``eq``/``gt``) compare a number to
zero; ``and``/``or``/``not`` combine Booleans; ``add``/``sub``/``mul`` are
arithmetic; ``sel(g, h, b)`` returns ``g`` when ``b`` holds and ``h``
otherwise; the single ``output`` gate carries the accept decision.

Text format (one gate per line, parents before children)::

    network inputs=2
    0 input 0
    1 const 3/2
    2 mul 0 1
    3 gt 2
    4 output 3
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import NetworkError, ParseError

SIGN_RELS = ("lt", "eq", "gt")
ARITH_OPS = ("add", "sub", "mul")
BOOL_OPS = ("and", "or")

NUMERIC_KINDS = frozenset({"input", "const", "add", "sub", "mul", "sel"})
BOOLEAN_KINDS = frozenset({"lt", "eq", "gt", "and", "or", "not"})

INDEGREE = {
    "input": 0, "const": 0,
    "output": 1, "lt": 1, "eq": 1, "gt": 1, "not": 1,
    "add": 2, "sub": 2, "mul": 2, "and": 2, "or": 2,
    "sel": 3,
}

# expected value type of each parent slot: "num" or "bool"
_PARENT_TYPES = {
    "add": ("num", "num"), "sub": ("num", "num"), "mul": ("num", "num"),
    "lt": ("num",), "eq": ("num",), "gt": ("num",),
    "and": ("bool", "bool"), "or": ("bool", "bool"), "not": ("bool",),
    "sel": ("num", "num", "bool"),
    "output": ("bool",),
}

_COMMUTATIVE = frozenset({"add", "mul", "and", "or"})


def value_type(kind: str) -> str | None:
    if kind in NUMERIC_KINDS:
        return "num"
    if kind in BOOLEAN_KINDS:
        return "bool"
    return None


_RATIONAL_RE = re.compile(r"^([+-]?)(\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``[sign]int`` or ``[sign]int/positive-int`` in lowest terms."""
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    sign, num, den = m.groups()
    num = int(num)
    if den is None:
        value = Fraction(num)
    else:
        d = int(den)
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        value = Fraction(num, d)
        if value.denominator != d:
            raise ValueError(f"rational {text!r} is not in lowest terms")
    return -value if sign == "-" else value


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Gate:
    id: int
    kind: str
    parents: tuple[int, ...] = ()
    # variable index for ``input``, value for ``const``; unused otherwise
    arg: int | Fraction | None = None

    def __str__(self) -> str:
        if self.kind == "input":
            return f"{self.id} input {self.arg}"
        if self.kind == "const":
            return f"{self.id} const {format_rational(self.arg)}"
        return " ".join([str(self.id), self.kind, *map(str, self.parents)])


@dataclass(frozen=True)
class Diagnostic:
    gate_id: int | None
    rule: str
    message: str

    def __str__(self) -> str:
        where = f"gate {self.gate_id}" if self.gate_id is not None else "network"
        return f"{self.rule} at {where}: {self.message}"


@dataclass(frozen=True)
class DepthReport:
    network_depth: int
    per_gate_depth: dict[int, int]
    size: int


@dataclass(frozen=True)
class Network:
    input_arity: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    @cached_property
    def index(self) -> dict[int, Gate]:
        return {g.id: g for g in self.gates}

    def __getitem__(self, gate_id: int) -> Gate:
        return self.index[gate_id]

    def __len__(self) -> int:
        return len(self.gates)

    @cached_property
    def diagnostics(self) -> tuple[Diagnostic, ...]:
        return tuple(_diagnose(self))

    @property
    def is_valid(self) -> bool:
        return not self.diagnostics

    def check(self) -> "Network":
        """Return ``self`` if valid, else raise :class:`NetworkError`."""
        if self.diagnostics:
            raise NetworkError(self.diagnostics)
        return self

    @cached_property
    def output_id(self) -> int:
        outs = [g.id for g in self.gates if g.kind == "output"]
        if len(outs) != 1:
            raise NetworkError(self.diagnostics or [Diagnostic(None, "MissingOutput", "no output gate")])
        return outs[0]

    @cached_property
    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {g.id: [] for g in self.gates}
        for g in self.gates:
            for p in g.parents:
                if p in kids:
                    kids[p].append(g.id)
        return kids

    @cached_property
    def order(self) -> tuple[int, ...]:
        """Gate ids in a topological order (parents first)."""
        self.check()
        return tuple(_topological_order(self))

    def count(self, *kinds: str) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)

    def to_text(self) -> str:
        return format_network(self)


def _diagnose(net: Network) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    seen: dict[int, Gate] = {}
    for g in net.gates:
        if g.id in seen:
            diags.append(Diagnostic(g.id, "DuplicateId", "gate id used twice"))
        seen[g.id] = g
    if net.input_arity < 0:
        diags.append(Diagnostic(None, "BadInputIndex", "negative input arity"))

    for g in net.gates:
        if g.kind not in INDEGREE:
            diags.append(Diagnostic(g.id, "BadKind", f"unknown gate kind {g.kind!r}"))
            continue
        if len(g.parents) != INDEGREE[g.kind]:
            diags.append(Diagnostic(
                g.id, "BadIndegree",
                f"{g.kind} needs {INDEGREE[g.kind]} parents, has {len(g.parents)}"))
        if g.kind == "input":
            if not isinstance(g.arg, int) or isinstance(g.arg, bool) or not 0 <= g.arg < net.input_arity:
                diags.append(Diagnostic(
                    g.id, "BadInputIndex",
                    f"input index {g.arg!r} outside [0, {net.input_arity})"))
        if g.kind == "const" and not isinstance(g.arg, (int, Fraction)):
            diags.append(Diagnostic(g.id, "BadConst", f"constant {g.arg!r} is not rational"))
        for slot, p in enumerate(g.parents):
            parent = seen.get(p)
            if parent is None:
                diags.append(Diagnostic(g.id, "DanglingParent", f"parent {p} does not exist"))
                continue
            want = _PARENT_TYPES.get(g.kind, ())
            if slot < len(want):
                have = value_type(parent.kind)
                if have != want[slot]:
                    diags.append(Diagnostic(
                        g.id, "TypeMismatch",
                        f"parent {slot} ({p}, {parent.kind}) should be {want[slot]}-typed"))

    outs = [g for g in net.gates if g.kind == "output"]
    if not outs:
        diags.append(Diagnostic(None, "MissingOutput", "network has no output gate"))
    elif len(outs) > 1:
        for g in outs[1:]:
            diags.append(Diagnostic(g.id, "MultipleOutputs", "second output gate"))

    for gid in _cycle_members(seen):
        diags.append(Diagnostic(gid, "Cycle", "gate lies on a directed cycle"))
    return diags


def _cycle_members(index: Mapping[int, Gate]) -> list[int]:
    """Ids of gates on some cycle (iterative three-colour DFS)."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {gid: WHITE for gid in index}
    on_cycle: set[int] = set()
    for root in index:
        if colour[root] != WHITE:
            continue
        stack = [(root, iter(index[root].parents))]
        path = [root]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            for p in it:
                if p not in colour:
                    continue
                if colour[p] == GREY:
                    on_cycle.update(path[path.index(p):])
                elif colour[p] == WHITE:
                    colour[p] = GREY
                    path.append(p)
                    stack.append((p, iter(index[p].parents)))
                    break
            else:
                colour[node] = BLACK
                stack.pop()
                path.pop()
    return sorted(on_cycle)


def _topological_order(net: Network) -> list[int]:
    placed: set[int] = set()
    order: list[int] = []
    # fast path: file order is already topological
    ok = True
    for g in net.gates:
        if any(p not in placed for p in g.parents):
            ok = False
            break
        placed.add(g.id)
        order.append(g.id)
    if ok:
        return order
    indeg = {g.id: len(g.parents) for g in net.gates}
    kids = net.children
    ready = [g.id for g in net.gates if not g.parents]
    order = []
    while ready:
        gid = ready.pop()
        order.append(gid)
        for c in kids[gid]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    return order


def validate(net: Network) -> list[Diagnostic]:
    """All well-formedness violations of ``net``; an empty list means ok."""
    return list(net.diagnostics)


def size(net: Network) -> int:
    return len(net.gates)


def gate_depths(net: Network) -> dict[int, int]:
    """Longest edge-count path from any indegree-0 gate to each gate."""
    depths: dict[int, int] = {}
    index = net.index
    for gid in net.order:
        parents = index[gid].parents
        depths[gid] = 1 + max(depths[p] for p in parents) if parents else 0
    return depths


def depth(net: Network) -> DepthReport:
    per_gate = gate_depths(net)
    return DepthReport(per_gate[net.output_id], per_gate, len(net.gates))


def network_depth(net: Network) -> int:
    return depth(net).network_depth


def ancestors(net: Network, gate_id: int) -> set[int]:
    seen = {gate_id}
    stack = [gate_id]
    index = net.index
    while stack:
        for p in index[stack.pop()].parents:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def prune(net: Network) -> Network:
    """Drop every gate that is not an ancestor of the output gate."""
    keep = ancestors(net, net.output_id)
    if len(keep) == len(net.gates):
        return net
    return Network(net.input_arity, tuple(g for g in net.gates if g.id in keep))


# ---------------------------------------------------------------------------
# text format


def format_network(net: Network) -> str:
    lines = [f"network inputs={net.input_arity}"]
    lines.extend(str(g) for g in net.gates)
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"^network\s+inputs=(\d+)$")


def parse_network(text: str, check: bool = True) -> Network:
    """Parse the line-based network format.

    Forward references are rejected.  With ``check`` the parsed network must
    also pass :func:`validate`.
    """
    arity = None
    gates: list[Gate] = []
    defined: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if arity is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise ParseError("expected header 'network inputs=<n>'", lineno)
            arity = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(f"malformed gate line {line!r}", lineno)
        try:
            gid = int(parts[0])
        except ValueError:
            raise ParseError(f"bad gate id {parts[0]!r}", lineno) from None
        if gid < 0:
            raise ParseError(f"negative gate id {gid}", lineno)
        if gid in defined:
            raise ParseError(f"gate id {gid} defined twice", lineno)
        kind = parts[1]
        if kind not in INDEGREE:
            raise ParseError(f"unknown gate kind {kind!r}", lineno)
        args = parts[2:]
        if kind == "input":
            if len(args) != 1 or not args[0].isdigit():
                raise ParseError("input gate takes one variable index", lineno)
            gate = Gate(gid, kind, (), int(args[0]))
        elif kind == "const":
            if len(args) != 1:
                raise ParseError("const gate takes one rational", lineno)
            try:
                gate = Gate(gid, kind, (), parse_rational(args[0]))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        else:
            if len(args) != INDEGREE[kind]:
                raise ParseError(f"{kind} takes {INDEGREE[kind]} parents, got {len(args)}", lineno)
            try:
                parents = tuple(int(a) for a in args)
            except ValueError:
                raise ParseError(f"non-integer parent in {line!r}", lineno) from None
            for p in parents:
                if p not in defined:
                    raise ParseError(f"gate {gid} refers to undefined or later gate {p}", lineno)
            gate = Gate(gid, kind, parents)
        defined.add(gid)
        gates.append(gate)
    if arity is None:
        raise ParseError("empty network file")
    net = Network(arity, tuple(gates))
    if check:
        net.check()
    return net


# ---------------------------------------------------------------------------
# construction


class NetworkBuilder:
    """Incremental network construction with structural sharing.

    :meth:`gate` hash-conses: asking twice for the same kind, parents and
    argument returns the same id.  :meth:`place` copies a gate under a fixed
    id (used by passes so that surviving gates keep their ids).  Depth is
    tracked incrementally.
    """

    def __init__(self, input_arity: int, reserved: Iterable[int] = ()):
        self.input_arity = input_arity
        self.gates: list[Gate] = []
        self.index: dict[int, Gate] = {}
        self.depths: dict[int, int] = {}
        self._table: dict[tuple, int] = {}
        self._next = max(reserved, default=-1) + 1

    @staticmethod
    def _key(kind: str, parents: Sequence[int], arg) -> tuple:
        if kind in _COMMUTATIVE:
            parents = tuple(sorted(parents))
        if kind == "const":
            arg = Fraction(arg)
        return (kind, tuple(parents), arg)

    def _append(self, gate: Gate) -> int:
        if gate.id in self.index:
            raise ValueError(f"gate id {gate.id} already placed")
        for p in gate.parents:
            if p not in self.index:
                raise ValueError(f"gate {gate.id}: parent {p} not yet placed")
        self.gates.append(gate)
        self.index[gate.id] = gate
        self.depths[gate.id] = 1 + max(self.depths[p] for p in gate.parents) if gate.parents else 0
        self._next = max(self._next, gate.id + 1)
        return gate.id

    def fresh_id(self) -> int:
        gid = self._next
        self._next += 1
        return gid

    def gate(self, kind: str, *parents: int, arg=None) -> int:
        if kind == "const":
            arg = Fraction(arg)
        key = self._key(kind, parents, arg)
        found = self._table.get(key)
        if found is not None:
            return found
        gid = self._append(Gate(self.fresh_id(), kind, tuple(parents), arg))
        self._table[key] = gid
        return gid

    def place(self, gate_id: int, kind: str, parents: Sequence[int] = (), arg=None) -> int:
        if kind == "const":
            arg = Fraction(arg)
        gid = self._append(Gate(gate_id, kind, tuple(parents), arg))
        self._table.setdefault(self._key(kind, parents, arg), gid)
        return gid

    # convenience constructors
    def input(self, k: int) -> int:
        return self.gate("input", arg=k)

    def const(self, value) -> int:
        return self.gate("const", arg=Fraction(value))

    def add(self, a: int, b: int) -> int:
        return self.gate("add", a, b)

    def sub(self, a: int, b: int) -> int:
        return self.gate("sub", a, b)

    def mul(self, a: int, b: int) -> int:
        return self.gate("mul", a, b)

    def sign(self, rel: str, a: int) -> int:
        if rel not in SIGN_RELS:
            raise ValueError(f"bad sign relation {rel!r}")
        return self.gate(rel, a)

    def and_(self, a: int, b: int) -> int:
        return self.gate("and", a, b)

    def or_(self, a: int, b: int) -> int:
        return self.gate("or", a, b)

    def not_(self, a: int) -> int:
        return self.gate("not", a)

    def select(self, g: int, h: int, b: int) -> int:
        return self.gate("sel", g, h, b)

    def output(self, a: int, gate_id: int | None = None) -> int:
        if gate_id is None:
            gate_id = self.fresh_id()
        return self.place(gate_id, "output", (a,))

    def depth_of(self, gate_id: int) -> int:
        return self.depths[gate_id]

    def embed(self, net: Network, input_map: Mapping[int, int] | None = None) -> tuple[dict[int, int], int]:
        """Copy ``net`` (without its output gate) into this builder.

        Input variable ``k`` of ``net`` is read from variable
        ``input_map[k]`` (identity by default).  Returns the old-to-new id map
        and the new id of the output gate's parent.
        """
        mapping: dict[int, int] = {}
        index = net.index
        for gid in net.order:
            g = index[gid]
            if g.kind == "output":
                continue
            if g.kind == "input":
                var = g.arg if input_map is None else input_map[g.arg]
                mapping[gid] = self.input(var)
            elif g.kind == "const":
                mapping[gid] = self.const(g.arg)
            else:
                mapping[gid] = self.gate(g.kind, *(mapping[p] for p in g.parents))
        return mapping, mapping[index[net.output_id].parents[0]]

    def build(self, prune_unused: bool = False) -> Network:
        net = Network(self.input_arity, tuple(self.gates)).check()
        return prune(net) if prune_unused else net
