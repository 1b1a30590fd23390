from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arithnet.errors import NetworkError, ParseError
from arithnet.fuzz import random_network
from arithnet.network import (
    Gate, Network, NetworkBuilder, depth, format_network, gate_depths, parse_network,
    parse_rational, size, validate,
)


def rules(net):
    return {d.rule for d in validate(net)}


def test_minimal_network_is_valid(minimal):
    assert validate(minimal) == []
    rep = depth(minimal)
    assert rep.network_depth == 2
    assert rep.size == size(minimal) == 3
    assert rep.per_gate_depth == {0: 0, 1: 1, 2: 2}


def test_empty_network():
    net = Network(0, ())
    assert size(net) == 0
    assert rules(net) == {"MissingOutput"}


def test_select_with_boolean_first_parent_is_type_mismatch():
    net = Network(1, (
        Gate(0, "input", (), 0), Gate(1, "gt", (0,)),
        Gate(2, "sel", (1, 0, 1)), Gate(3, "eq", (2,)), Gate(4, "output", (3,)),
    ))
    diags = validate(net)
    assert [(d.gate_id, d.rule) for d in diags] == [(2, "TypeMismatch")]


def test_self_loop_is_cycle():
    net = Network(1, (Gate(0, "input", (), 0), Gate(1, "or", (1, 1)), Gate(2, "output", (1,))))
    assert "Cycle" in rules(net)


@pytest.mark.parametrize("gates, rule", [
    ((Gate(0, "input", (), 0), Gate(1, "gt", (0, 0)), Gate(2, "output", (1,))), "BadIndegree"),
    ((Gate(0, "input", (), 3), Gate(1, "gt", (0,)), Gate(2, "output", (1,))), "BadInputIndex"),
    ((Gate(0, "input", (), 0), Gate(1, "gt", (7,)), Gate(2, "output", (1,))), "DanglingParent"),
    ((Gate(0, "input", (), 0), Gate(1, "gt", (0,)), Gate(2, "output", (1,)), Gate(3, "output", (1,))),
     "MultipleOutputs"),
    ((Gate(0, "input", (), 0), Gate(1, "gt", (0,))), "MissingOutput"),
    ((Gate(0, "input", (), 0), Gate(1, "add", (0, 0)), Gate(2, "output", (1,))), "TypeMismatch"),
    ((Gate(0, "input", (), 0), Gate(1, "gt", (0,)), Gate(2, "output", (1,)), Gate(3, "not", (2,))),
     "TypeMismatch"),
])
def test_diagnostics_name_rule(gates, rule):
    assert rule in rules(Network(1, gates))


def test_check_raises_with_all_diagnostics():
    net = Network(1, (Gate(0, "input", (), 5), Gate(1, "gt", (9,))))
    with pytest.raises(NetworkError) as info:
        net.check()
    assert {d.rule for d in info.value.diagnostics} >= {"BadInputIndex", "DanglingParent", "MissingOutput"}


def test_child_depth_is_max_plus_one():
    b = NetworkBuilder(1)
    x = b.input(0)
    deep = x
    for _ in range(5):
        deep = b.mul(deep, deep)
    shallow = b.add(b.add(b.add(x, x), x), x)
    s = b.add(deep, shallow)
    assert (b.depth_of(deep), b.depth_of(shallow), b.depth_of(s)) == (5, 3, 6)
    out = b.output(b.sign("gt", s))
    net = b.build()
    assert gate_depths(net)[out] == depth(net).network_depth == 8


def test_constant_gates_count_as_sources():
    net = parse_network("network inputs=0\n0 const 1/2\n1 gt 0\n2 output 1\n")
    assert gate_depths(net) == {0: 0, 1: 1, 2: 2}


def test_round_trip_text():
    text = ("network inputs=2\n0 input 0\n1 input 1\n2 const -3/4\n3 mul 0 2\n4 lt 3\n"
            "5 eq 1\n6 not 5\n7 and 4 6\n8 sel 3 1 7\n9 gt 8\n10 or 9 7\n11 output 10\n")
    net = parse_network(text)
    assert format_network(net) == text
    assert parse_network(format_network(net)) == net


def test_parse_comments_and_blank_lines():
    net = parse_network("# header comment\nnetwork inputs=1\n\n0 input 0  # x\n1 eq 0\n2 output 1\n")
    assert size(net) == 3


@pytest.mark.parametrize("text, line", [
    ("network inputs=1\n0 input 0\n1 gt 2\n2 output 1\n", 3),
    ("network inputs=1\n0 input 0\n0 gt 0\n", 3),
    ("network inputs=1\n0 input 0\n1 ge 0\n", 3),
    ("network inputs=1\n0 const 2/4\n", 2),
    ("network inputs=1\n0 const 1/0\n", 2),
    ("netwrk inputs=1\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_network(text)
    assert info.value.line == line


@pytest.mark.parametrize("text, value", [
    ("3", Fraction(3)), ("-3", Fraction(-3)), ("+7/9", Fraction(7, 9)), ("-1/2", Fraction(-1, 2)), ("0", Fraction(0)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/-2", "2/4", "0/5", "1.5", "", "1/0"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_builder_shares_structure():
    b = NetworkBuilder(2)
    x, y = b.input(0), b.input(1)
    assert b.add(x, y) == b.add(y, x)
    assert b.sub(x, y) != b.sub(y, x)
    assert b.const(Fraction(1, 2)) == b.const(Fraction(2, 4))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_size_bounded_by_depth(seed):
    import random

    net = random_network(random.Random(seed))
    assert validate(net) == []
    rep = depth(net)
    assert rep.size <= 3 ** (rep.network_depth + 1)
    assert rep.network_depth == rep.per_gate_depth[net.output_id]
    order = net.order
    pos = {g: i for i, g in enumerate(order)}
    assert all(pos[p] < pos[g.id] for g in net.gates for p in g.parents)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_adding_a_gate_never_lowers_depths(seed):
    import random

    rng = random.Random(seed)
    net = random_network(rng)
    before = gate_depths(net)
    ids = [g.id for g in net.gates if g.kind in ("input", "const", "add", "sub", "mul", "sel")]
    extra = Gate(max(before) + 1, "mul", (rng.choice(ids), rng.choice(ids)))
    grown = Network(net.input_arity, net.gates + (extra,))
    after = gate_depths(grown)
    assert all(after[g] >= d for g, d in before.items())
