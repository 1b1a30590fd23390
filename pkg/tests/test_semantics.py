import random
from fractions import Fraction

import pytest

from arithnet.compile import compile_formula
from arithnet.errors import ArityMismatch, PieceBudgetExceeded
from arithnet.formula import Atom, conj, disj, eval_formula
from arithnet.network import NetworkBuilder, parse_network
from arithnet.poly import Polynomial
from arithnet.problems import parity_network
from arithnet.sampling import sample_points
from arithnet.semantics import PiecewisePoly, compiled, denote, evaluate

X = [Polynomial.var(i, 3) for i in range(3)]
f, g, h = X


def test_select_takes_first_branch_when_true():
    net = parse_network("network inputs=0\n0 const 5\n1 const 7\n2 eq 0\n3 gt 0\n"
                        "4 sel 0 1 3\n5 sel 0 1 2\n6 sub 4 0\n7 eq 6\n8 output 7\n")
    trace = evaluate(net, [], want_trace=True).trace
    assert trace[4] == 5 and trace[5] == 7
    assert trace[3] is True and trace[2] is False


def test_eq_on_zero():
    net = parse_network("network inputs=1\n0 input 0\n1 eq 0\n2 output 1\n")
    assert evaluate(net, [0]).accept
    assert not evaluate(net, [Fraction(1, 10**9)]).accept


def test_parity_network_accepts_all_integer_triple():
    assert evaluate(parity_network(8), [2, 5, 7]).accept


def test_arity_checked(minimal):
    with pytest.raises(ArityMismatch):
        evaluate(minimal, [1, 2])


def test_trace_covers_every_gate(minimal):
    res = evaluate(minimal, [Fraction(-1, 3)], want_trace=True)
    assert res.trace == {0: Fraction(-1, 3), 1: False, 2: False}
    assert res.accept is False


def test_single_atom_denotation(minimal):
    assert denote(minimal).formula == Atom(Polynomial.var(0, 1), "gt")


def test_select_denotation_pieces():
    b = NetworkBuilder(2)
    x, y = b.input(0), b.input(1)
    guard = b.sign("gt", x)
    s = b.select(b.mul(x, y), y, guard)
    b.output(b.sign("eq", s))
    net = b.build()
    den = denote(net)
    x0, x1 = Polynomial.var(0, 2), Polynomial.var(1, 2)
    pieces = den[s]
    assert isinstance(pieces, PiecewisePoly)
    assert dict(pieces.pieces) == {
        x0 * x1: Atom(x0, "gt"),
        x1: disj(Atom(x0, "lt"), Atom(x0, "eq")),
    }


def test_example_formula_round_trip():
    B = disj(conj(Atom(g, "eq"), Atom(f * f, "gt")), conj(Atom(h, "eq"), Atom(f, "eq")))
    net = compile_formula(B)
    BN = denote(net).formula
    for x in sample_points(3, 1000, 0, box=3):
        assert eval_formula(BN, x) == eval_formula(B, x) == evaluate(net, x).accept


def test_piece_budget():
    b = NetworkBuilder(1)
    x = b.input(0)
    v = x
    for k in range(8):
        v = b.select(b.add(v, b.const(k + 1)), b.mul(v, v), b.sign("gt", v))
    b.output(b.sign("eq", v))
    net = b.build()
    with pytest.raises(PieceBudgetExceeded) as info:
        denote(net, piece_budget=16)
    assert info.value.budget == 16


def test_denotation_report_lines(minimal):
    report = denote(minimal).report().splitlines()
    assert report == ["0 input [(x0 ; true)]", "1 gt (gt x0)", "2 output (gt x0)"]


def test_sound_on_corpus_sample(corpus):
    # numeric soundness: the piece whose guard holds gives the traced value,
    # and at most one guard holds
    for i, net in enumerate(corpus[:40]):
        den = denote(net)
        prog = compiled(net)
        numeric = [gid for gid in net.order if isinstance(den[gid], PiecewisePoly)]
        for x in sample_points(net.input_arity, 100, i):
            trace = prog.trace(x)
            assert eval_formula(den.formula, x) == trace[net.output_id]
            for gid in numeric:
                holding = den[gid].holding(x)
                assert len(holding) == 1
                assert den[gid].pieces[holding[0]][0](x) == trace[gid]


def test_compiled_evaluator_matches_trace(corpus):
    rng = random.Random(5)
    for net in corpus[:30]:
        prog = compiled(net)
        for _ in range(20):
            x = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(net.input_arity)]
            assert prog.accepts(x) == prog.trace(x)[net.output_id]
