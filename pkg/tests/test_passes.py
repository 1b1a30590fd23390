from fractions import Fraction

import pytest

from arithnet.analysis import check_depth_contract, equivalent_on_samples
from arithnet.compile import clog2
from arithnet.errors import BadProjectionArity, BadThresholds, NegationPresent, UnpairedSelection
from arithnet.formula import Atom, conj, disj, eval_formula, schedule
from arithnet.network import NetworkBuilder, network_depth, parse_network
from arithnet.passes import (
    compactify, eliminate_negations, fiber_block, fibered_product, find_pairs, pair_selections,
    t_union, t_union_copies,
)
from arithnet.poly import Polynomial
from arithnet.sampling import sample_points
from arithnet.semantics import compiled, denote, evaluate

F, G, H = (Polynomial.var(i, 3) for i in range(3))


def not_gt_net():
    return parse_network("network inputs=1\n0 input 0\n1 const 1\n2 sub 0 1\n3 gt 2\n4 not 3\n5 output 4\n")


def test_negation_rewired_through_complement_pair():
    out = eliminate_negations(not_gt_net())
    assert out.count("not") == 0
    kinds = {g.id: g for g in out.gates}
    root = kinds[kinds[out.output_id].parents[0]]
    assert root.kind == "or"
    assert sorted(kinds[p].kind for p in root.parents) == ["eq", "lt"]
    assert all(kinds[p].parents == (2,) for p in root.parents)
    for x in (0, 1, 2, Fraction(3, 2)):
        assert evaluate(out, [x]).accept == (x <= 1)


def test_negation_free_net_unchanged(minimal):
    assert eliminate_negations(minimal) == minimal


def test_double_negation_and_de_morgan():
    net = parse_network("network inputs=2\n0 input 0\n1 input 1\n2 gt 0\n3 eq 1\n4 and 2 3\n"
                        "5 not 4\n6 not 5\n7 not 2\n8 or 6 7\n9 output 8\n")
    out = eliminate_negations(net)
    assert out.count("not") == 0
    assert network_depth(out) <= network_depth(net)
    assert equivalent_on_samples(net, out, 500).equivalent


def test_surviving_gates_keep_ids():
    net = not_gt_net()
    out = eliminate_negations(net)
    for gid in (0, 1, 2):
        assert out.index[gid] == net.index[gid]
    assert out.index[5].kind == "output" and 3 not in out.index and 4 not in out.index


def single_select():
    b = NetworkBuilder(2)
    x, y = b.input(0), b.input(1)
    s = b.select(b.mul(x, y), b.sub(y, b.const(1)), b.sign("gt", x))
    b.output(b.sign("gt", s))
    return b.build(), s


def test_pairing_single_select_value_preserved():
    net, s = single_select()
    paired, info = pair_selections(net)
    (pair,) = info.pairs
    assert pair.sum_gate == s and paired.index[s].kind == "add"
    for gid in (pair.v, pair.v_prime):
        assert paired.index[paired.index[gid].parents[1]].arg == 0
    orig, new = compiled(net), compiled(paired)
    for x in sample_points(2, 1000, 0):
        t0, t1 = orig.trace(x), new.trace(x)
        assert t1[s] == t0[s]
        assert t1[pair.guard] != t1[pair.guard_prime]
        assert t1[paired.output_id] == t0[net.output_id]


def test_pairing_without_select(minimal):
    paired, info = pair_selections(minimal)
    assert info.pairs == ()
    assert paired == minimal


def test_pairing_rejects_not():
    with pytest.raises(NegationPresent):
        pair_selections(not_gt_net())


def test_find_pairs_matches_info():
    net, _ = single_select()
    paired, info = pair_selections(net)
    assert find_pairs(paired) == info
    with pytest.raises(UnpairedSelection):
        find_pairs(net)
    assert "# v v' guard guard' sum" in info.to_text()


def test_compactify_eq_cluster():
    net = parse_network("network inputs=1\n0 input 0\n1 eq 0\n2 output 1\n")
    c = compactify(net, Fraction(1, 4), Fraction(1, 16), add_ball=False)
    for x in (0, Fraction(1, 4), Fraction(-1, 4), Fraction(26, 100), 1):
        assert evaluate(c, [x]).accept == (x * x <= Fraction(1, 16))


def test_compactify_keeps_sign_ids_as_or():
    net = parse_network("network inputs=1\n0 input 0\n1 gt 0\n2 lt 0\n3 or 1 2\n4 output 3\n")
    c = compactify(net, Fraction(1, 4), Fraction(1, 16))
    assert c.index[1].kind == "or" and c.index[2].kind == "or"
    for x in (0, Fraction(1, 5), Fraction(1, 4), Fraction(-1, 4), 2, 3):
        assert evaluate(c, [x]).accept == (abs(x) >= Fraction(1, 4) and x * x <= 4)


def test_compactify_preconditions():
    net, _ = single_select()
    with pytest.raises(UnpairedSelection):
        compactify(net, Fraction(1, 4), Fraction(1, 16))
    with pytest.raises(NegationPresent):
        compactify(not_gt_net(), Fraction(1, 4), Fraction(1, 16))
    with pytest.raises(BadThresholds):
        compactify(parse_network("network inputs=1\n0 input 0\n1 eq 0\n2 output 1\n"), Fraction(1, 4), Fraction(1, 2))


def example_paired_network():
    """The worked example's paired network, built by hand from its formula.

    N = eq(sel(g, h, f^2 > 0)); pairing with the complement f = 0 gives
    eq(sel(g, 0, f^2 > 0) + sel(h, 0, f = 0)) and (f^2 > 0 or f = 0).
    """
    b = NetworkBuilder(3)
    f, g, h = b.input(0), b.input(1), b.input(2)
    zero = b.const(0)
    a = b.sign("gt", b.mul(f, f))
    a_prime = b.sign("eq", f)
    total = b.add(b.select(g, zero, a), b.select(h, zero, a_prime))
    b.output(b.and_(b.sign("eq", total), b.or_(a, a_prime)))
    return b.build()


EXAMPLE_B_PAIRED = conj(
    disj(conj(Atom(G, "eq"), Atom(F * F, "gt")), conj(Atom(H, "eq"), Atom(F, "eq"))),
    disj(Atom(F * F, "gt"), Atom(F, "eq")))


def example_a(d, e):
    return conj(
        disj(conj(Atom(G * G - e, "le"), Atom(F * F - d, "ge")),
             conj(Atom(H * H - e, "le"), Atom(F * F - e, "le"))),
        disj(Atom(F * F - d, "ge"), Atom(F * F - e, "le")))


def test_hand_built_example_network():
    net = example_paired_network()
    assert len(find_pairs(net).pairs) == 1
    BN = denote(net).formula
    prog = compiled(net)
    for x in sample_points(3, 2000, 11, box=3):
        assert eval_formula(BN, x) == eval_formula(EXAMPLE_B_PAIRED, x) == prog.accepts(x)


@pytest.mark.parametrize("d, e", [(Fraction(1, 4), Fraction(1, 16)), (Fraction(1, 100), Fraction(1, 10**6))])
def test_hand_built_example_compactified(d, e):
    c = compiled(compactify(example_paired_network(), d, e, add_ball=False))
    A = example_a(d, e)
    for x in sample_points(3, 3000, 12, box=3):
        assert c.accepts(x) == eval_formula(A, x)


def test_t_union_copies_and_ball():
    net = parse_network("network inputs=2\n0 input 0\n1 input 1\n2 mul 0 1\n3 gt 2\n4 eq 0\n"
                        "5 or 3 4\n6 output 5\n")
    s = schedule(2)
    T = t_union(net, s)
    copies = t_union_copies(net, s)
    assert len(copies) == 3
    consts = {g.arg for g in T.gates if g.kind == "const"}
    assert all(1 / d in consts for _, d in s)
    assert check_depth_contract(net, T, "t-union", copies=copies).ok
    progs = [compiled(c) for c in copies]
    pT = compiled(T)
    big = 1 / s.pairs[0][1]
    for x in sample_points(2, 500, 4, box=4):
        acc = pT.accepts(x)
        assert acc == any(p.accepts(x) for p in progs)
        if acc:
            assert sum(v * v for v in x) <= big


def test_t_union_single_pair_equals_compactify():
    net = parse_network("network inputs=1\n0 input 0\n1 eq 0\n2 output 1\n")
    s = schedule(0)
    ((e, d),) = s.pairs
    assert equivalent_on_samples(t_union(net, s), compactify(net, d, e), 500).equivalent


def test_fibered_product_layout():
    net = parse_network("network inputs=2\n0 input 0\n1 input 1\n2 sub 0 1\n3 gt 2\n4 output 3\n")
    W = fibered_product(net, 1, 3)
    assert W.input_arity == 4
    # accept iff x0 > y_i for every block
    assert evaluate(W, [5, 1, 2, 3]).accept
    assert not evaluate(W, [5, 1, 6, 3]).accept
    assert fiber_block([5, 1, 6, 3], 2, 1, 1) == [5, 6]
    assert network_depth(W) <= network_depth(net) + clog2(3)
    assert equivalent_on_samples(fibered_product(net, 1, 1), net, 300).equivalent
    assert fibered_product(net, 0, 2).input_arity == 2


def test_fibered_product_errors(minimal):
    with pytest.raises(BadProjectionArity):
        fibered_product(minimal, 2, 1)
    with pytest.raises(BadProjectionArity):
        fibered_product(minimal, 1, 0)


# -- corpus-scale checks (the acceptance suite covers the full corpora) ----


def test_corpus_negation_elimination(corpus):
    for i, net in enumerate(corpus[:50]):
        out = eliminate_negations(net)
        assert out.count("not") == 0
        assert check_depth_contract(net, out, "neg-elim").ok
        assert equivalent_on_samples(net, out, 300, seed=i).equivalent


def test_corpus_pairing(corpus):
    for i, net in enumerate(corpus[:50]):
        src = eliminate_negations(net)
        out, info = pair_selections(src)
        assert out.count("not") == 0
        assert len(info.pairs) == src.count("sel") == out.count("sel") // 2
        assert check_depth_contract(src, out, "pair-sel").ok
        assert equivalent_on_samples(src, out, 300, seed=i).equivalent


def select_chain(k):
    b = NetworkBuilder(1)
    x = b.input(0)
    guard = b.sign("gt", x)
    v = x
    for i in range(k):
        v = b.select(v, b.const(i + 1), guard)
    b.output(b.sign("eq", v))
    return b.build()


@pytest.mark.parametrize("k", [1, 4, 9, 16, 32])
def test_pairing_depth_on_select_chains(k):
    # each rewritten selection adds one level along a chain, so growth is
    # linear in depth; the fixed logarithmic overhead only covers short chains
    net = select_chain(k)
    out, _ = pair_selections(net)
    d, d2 = network_depth(net), network_depth(out)
    assert d2 <= 2 * d + 6
    assert check_depth_contract(net, out, "pair-sel").ok is (k < 16)
    assert equivalent_on_samples(net, out, 200).equivalent


def test_passes_compose_on_parity_network():
    from arithnet.problems import parity_network

    net = parity_network(4)
    a = eliminate_negations(net)
    b, _ = pair_selections(a)
    c = compactify(b, Fraction(1, 4), Fraction(1, 32))
    s = schedule(3)
    T = t_union(b, s)
    assert check_depth_contract(net, a, "neg-elim").ok
    assert check_depth_contract(a, b, "pair-sel").ok
    assert check_depth_contract(b, c, "compactify").ok
    assert check_depth_contract(b, T, "t-union", copies=t_union_copies(b, s)).ok
    assert all(x.is_valid for x in (a, b, c, T))
