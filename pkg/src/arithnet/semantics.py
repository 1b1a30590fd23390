"""Operational and denotational semantics of arithmetic networks.

:func:`evaluate` runs a network on an exact rational point.  :func:`denote`
builds, gate by gate, the piecewise polynomial of every numeric gate and the
formula of every Boolean gate; the output gate's formula ``B(N)`` defines
exactly the set of accepted inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from .errors import ArityMismatch, PieceBudgetExceeded
from .formula import (
    FALSE, TRUE, Atom, Formula, Not, conj, disj, eval_formula, negate_nnf, to_sexpr,
)
from .network import Network
from .poly import Polynomial, to_fraction, to_mpq

DEFAULT_PIECE_BUDGET = 4096

# opcodes for the compiled evaluator
_INPUT, _CONST, _ADD, _SUB, _MUL, _LT, _EQ, _GT, _AND, _OR, _NOT, _SEL, _OUT = range(13)
_OPCODES = {
    "input": _INPUT, "const": _CONST, "add": _ADD, "sub": _SUB, "mul": _MUL,
    "lt": _LT, "eq": _EQ, "gt": _GT, "and": _AND, "or": _OR, "not": _NOT,
    "sel": _SEL, "output": _OUT,
}


class Evaluation(NamedTuple):
    accept: bool
    trace: dict[int, Union[Fraction, bool]] | None


class CompiledNetwork:
    """A network flattened into a slot program for repeated evaluation."""

    def __init__(self, net: Network):
        net.check()
        self.net = net
        self.ids = list(net.order)
        slot = {gid: i for i, gid in enumerate(self.ids)}
        index = net.index
        prog = []
        for gid in self.ids:
            g = index[gid]
            op = _OPCODES[g.kind]
            if op == _INPUT:
                prog.append((op, g.arg, 0, 0))
            elif op == _CONST:
                prog.append((op, to_mpq(g.arg), 0, 0))
            else:
                ps = [slot[p] for p in g.parents] + [0, 0]
                prog.append((op, ps[0], ps[1], ps[2]))
        self.prog = prog
        self.out_slot = slot[net.output_id]
        self._run = self._generate()

    def _generate(self):
        """Straight-line Python source for the slot program, compiled once."""
        consts = {}
        body = []
        for i, (op, a, b, c) in enumerate(self.prog):
            if op == _INPUT:
                expr = f"x[{a}]"
            elif op == _CONST:
                consts[f"c{i}"] = a
                expr = f"c{i}"
            elif op == _ADD:
                expr = f"v{a} + v{b}"
            elif op == _SUB:
                expr = f"v{a} - v{b}"
            elif op == _MUL:
                expr = f"v{a} * v{b}"
            elif op == _EQ:
                expr = f"v{a} == 0"
            elif op == _GT:
                expr = f"v{a} > 0"
            elif op == _LT:
                expr = f"v{a} < 0"
            elif op == _OR:
                expr = f"v{a} or v{b}"
            elif op == _AND:
                expr = f"v{a} and v{b}"
            elif op == _SEL:
                expr = f"v{a} if v{c} else v{b}"
            elif op == _NOT:
                expr = f"not v{a}"
            else:
                expr = f"v{a}"
            body.append(f"    v{i} = {expr}")
        every = ", ".join(f"v{i}" for i in range(len(self.prog)))
        lines = ["def run(x):", *body, f"    return [{every}]",
                 "def accept(x):", *body, f"    return v{self.out_slot}"]
        namespace = dict(consts)
        exec(compile("\n".join(lines), "<network>", "exec"), namespace)
        self._accept = namespace["accept"]
        return namespace["run"]

    def _point(self, x: Sequence) -> list:
        if len(x) != self.net.input_arity:
            raise ArityMismatch(f"network has {self.net.input_arity} inputs, point has {len(x)}")
        return [to_mpq(v) for v in x]

    def run(self, x: Sequence) -> list:
        return self._run(self._point(x))

    def accepts(self, x: Sequence) -> bool:
        return bool(self._accept(self._point(x)))

    def trace(self, x: Sequence) -> dict[int, Union[Fraction, bool]]:
        vals = self.run(x)
        return {
            gid: (v if isinstance(v, bool) else to_fraction(v))
            for gid, v in zip(self.ids, vals)
        }


_compiled_cache: dict[int, tuple[Network, CompiledNetwork]] = {}


def compiled(net: Network) -> CompiledNetwork:
    hit = _compiled_cache.get(id(net))
    if hit is not None and hit[0] is net:
        return hit[1]
    prog = CompiledNetwork(net)
    if len(_compiled_cache) > 256:
        _compiled_cache.clear()
    _compiled_cache[id(net)] = (net, prog)
    return prog


def evaluate(net: Network, x: Sequence, want_trace: bool = False) -> Evaluation:
    """Accept decision of ``net`` at ``x``, plus every gate's value on request."""
    prog = compiled(net)
    if want_trace:
        trace = prog.trace(x)
        return Evaluation(bool(trace[net.output_id]), trace)
    return Evaluation(prog.accepts(x), None)


def accepts(net: Network, x: Sequence) -> bool:
    return compiled(net).accepts(x)


# ---------------------------------------------------------------------------
# denotation


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomials ``f_i`` on the cells described by guard formulas ``B_i``."""

    pieces: tuple[tuple[Polynomial, Formula], ...]

    def __len__(self) -> int:
        return len(self.pieces)

    def value_at(self, x: Sequence) -> Fraction | None:
        """Value of the piece whose guard holds at ``x`` (None if no guard holds)."""
        for f, guard in self.pieces:
            if eval_formula(guard, x):
                return f(x)
        return None

    def holding(self, x: Sequence) -> list[int]:
        return [i for i, (_, guard) in enumerate(self.pieces) if eval_formula(guard, x)]

    def relation(self, rel: str) -> Formula:
        """The formula ``((f_1 rel 0) and B_1) or ... or ((f_k rel 0) and B_k)``."""
        return disj(*(conj(Atom(f, rel), guard) for f, guard in self.pieces))

    def __str__(self) -> str:
        return "[" + " ".join(f"({f} ; {to_sexpr(g)})" for f, g in self.pieces) + "]"


def _merge(pieces) -> tuple[tuple[Polynomial, Formula], ...]:
    """Join pieces carrying the same polynomial; drop empty guards."""
    grouped: dict[Polynomial, list[Formula]] = {}
    for f, guard in pieces:
        if guard is FALSE:
            continue
        grouped.setdefault(f, []).append(guard)
    return tuple((f, disj(*gs)) for f, gs in grouped.items())


@dataclass
class Denotation:
    net: Network
    gates: dict[int, Union[PiecewisePoly, Formula]]

    @property
    def formula(self) -> Formula:
        """``B(N)``, the formula of the output gate."""
        return self.gates[self.net.output_id]

    def __getitem__(self, gate_id: int):
        return self.gates[gate_id]

    def report(self) -> str:
        lines = []
        index = self.net.index
        for gid in self.net.order:
            den = self.gates[gid]
            body = str(den) if isinstance(den, PiecewisePoly) else to_sexpr(den)
            lines.append(f"{gid} {index[gid].kind} {body}")
        return "\n".join(lines) + "\n"


def denote(net: Network, piece_budget: int = DEFAULT_PIECE_BUDGET) -> Denotation:
    """Gate-wise denotation; raises :class:`PieceBudgetExceeded` on blowup."""
    net.check()
    n = net.input_arity
    out: dict[int, Union[PiecewisePoly, Formula]] = {}
    index = net.index
    for gid in net.order:
        g = index[gid]
        kind = g.kind
        if kind == "input":
            out[gid] = PiecewisePoly(((Polynomial.var(g.arg, n), TRUE),))
        elif kind == "const":
            out[gid] = PiecewisePoly(((Polynomial.const(g.arg, n), TRUE),))
        elif kind in ("add", "sub", "mul"):
            p, q = out[g.parents[0]], out[g.parents[1]]
            if len(p) * len(q) > piece_budget:
                raise PieceBudgetExceeded(gid, len(p) * len(q), piece_budget)
            if kind == "add":
                op = Polynomial.__add__
            elif kind == "sub":
                op = Polynomial.__sub__
            else:
                op = Polynomial.__mul__
            out[gid] = PiecewisePoly(_merge(
                (op(f, h), conj(b, c)) for f, b in p.pieces for h, c in q.pieces))
        elif kind in ("lt", "eq", "gt"):
            out[gid] = out[g.parents[0]].relation(kind)
        elif kind == "and":
            out[gid] = conj(out[g.parents[0]], out[g.parents[1]])
        elif kind == "or":
            out[gid] = disj(out[g.parents[0]], out[g.parents[1]])
        elif kind == "not":
            out[gid] = Not(out[g.parents[0]])
        elif kind == "sel":
            p, q, guard = (out[x] for x in g.parents)
            if len(p) + len(q) > piece_budget:
                raise PieceBudgetExceeded(gid, len(p) + len(q), piece_budget)
            complement = negate_nnf(guard)
            out[gid] = PiecewisePoly(_merge(
                [(f, conj(b, guard)) for f, b in p.pieces]
                + [(h, conj(c, complement)) for h, c in q.pieces]))
        else:  # output
            out[gid] = out[g.parents[0]]
    return Denotation(net, out)


def associated_formula(net: Network, piece_budget: int = DEFAULT_PIECE_BUDGET) -> Formula:
    return denote(net, piece_budget).formula
