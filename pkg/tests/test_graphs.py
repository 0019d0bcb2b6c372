import random

import pytest

from kazhdanw import graphs as G
from kazhdanw.graphs import (
    INF,
    ColoredGraph,
    GraphError,
    classify,
    count_q_n2,
    enumerate_bernoulli,
    enumerate_bw,
    enumerate_q_n2,
    enumerate_wheels,
    from_text,
)

import oracles


def pairs_of(g):
    return tuple(g.targets(r) for r in range(1, g.n_type1 + 1))


def assert_same_classes(package_graphs, oracle_pairs, keep_order=True):
    ours = [pairs_of(g) for g in package_graphs]
    assert len(oracles.dedup(ours, keep_order)) == len(ours), "package output has duplicates"
    assert len(oracles.dedup(ours + list(oracle_pairs), keep_order)) == len(oracle_pairs)


def valid(g):
    for r in range(1, g.n_type1 + 1):
        a, b = g.targets(r)
        if a == b or r in (a, b):
            return False
    return len(g.edges) == 2 * g.n_type1 and len(g.edges_into(INF)) <= 1


# -- construction -----------------------------------------------------------


@pytest.mark.parametrize(
    "edges,msg",
    [
        (((1, "F", None),), "out-degree"),
        (((1, 1, None), (1, "F", None)), "loop"),
        (((1, "F", None), (1, "F", None)), "double"),
        (((1, "F", None), (1, INF, None)), "colored"),
        (((1, "F", None), (1, 3, None)), "out of range"),
    ],
)
def test_invalid_graphs_rejected(edges, msg):
    with pytest.raises(GraphError, match=msg):
        ColoredGraph(1, ("F",), edges)


def test_two_dangling_edges_rejected():
    with pytest.raises(GraphError, match="infinity"):
        ColoredGraph(2, ("F",), ((1, "F", None), (1, INF, "-"), (2, "F", None), (2, INF, "-")))


def test_text_round_trip():
    for g in [G.first_order_graph(), G.two_point_chain(), G.bw_example(), G.wheel(3, (True, False, True))]:
        assert from_text(g.to_text()) == g


def test_text_parse_error():
    with pytest.raises(GraphError):
        from_text("no separator")


# -- families ---------------------------------------------------------------


def test_single_vertex_bernoulli_graph():
    gs = enumerate_bernoulli(1)
    assert len(gs) == 2
    assert G.first_order_graph() in gs
    assert all(len(g.edges_into("F")) == 1 and g.inf_edge() is not None for g in gs)


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_bernoulli_structure(t):
    for g in enumerate_bernoulli(t):
        assert valid(g)
        assert len(g.edges) == 2 * t
        assert len(g.edges_into("F")) == t
        assert classify(g) == G.FamilyTag("B", t)


def test_bernoulli_rejects_zero():
    with pytest.raises(GraphError):
        enumerate_bernoulli(0)


def test_two_wheel_is_unique():
    assert len(enumerate_wheels(2)) == 1


@pytest.mark.parametrize("i", [2, 3, 4])
def test_wheel_structure(i):
    for g in enumerate_wheels(i, edge_orders=True):
        assert valid(g)
        assert g.inf_edge() is None
        assert len(g.edges_into("F")) == i
        assert all(g.internal_in_degree(r) == 1 for r in range(1, i + 1))
        assert classify(g) == G.FamilyTag("W", i)


def test_wheel_rejects_small():
    with pytest.raises(GraphError):
        enumerate_wheels(1)


def test_bw_four_contains_both_attachment_shapes():
    tags = {(classify(g).wheel_size, classify(g).tail_size) for g in enumerate_bw(4)}
    assert tags == {(2, 2), (3, 1)}


@pytest.mark.parametrize("total", [4, 5])
def test_bw_structure(total):
    for g in enumerate_bw(total):
        assert valid(g)
        assert len(g.edges_into(INF)) == 1
        assert len(g.edges_into("F")) == total - 1
        assert classify(g).kind == "BW" and classify(g).size == total


def test_bw_rejects_small():
    with pytest.raises(GraphError):
        enumerate_bw(3)


def test_q_n2_small_counts():
    assert len(enumerate_q_n2(1)) == 2
    assert count_q_n2(2) == len(enumerate_q_n2(2)) == 36


def test_q_n2_cap():
    with pytest.raises(GraphError, match="capped"):
        enumerate_q_n2(5)


def test_labeled_chain_shape_in_q_n2_four():
    assert G.two_point_chain() in enumerate_q_n2(4)


def test_sampled_q_n2_graphs_are_members():
    rng = random.Random(3)
    for g in G.sample_q_n2(4, 10, rng):
        assert classify(g) == G.FamilyTag("Q_n2", 4)


def test_classify_examples():
    assert classify(G.first_order_graph()) == G.FamilyTag("B", 1)
    assert classify(G.wheel(3)) == G.FamilyTag("W", 3)
    tag = classify(G.bw_example())
    assert (tag.kind, tag.wheel_size, tag.tail_size) == ("BW", 4, 3)
    assert str(tag) == "BW(7;4,3)"
    assert classify(G.two_point_chain()).kind == "Q_n2"


def test_classify_other():
    g = ColoredGraph(2, ("F",), ((1, "F", None), (1, 2, None), (2, 1, None), (2, INF, "-")))
    assert classify(g).kind == "OTHER"


def test_canonical_form_identifies_relabelings():
    a = G.wheel(3, (True, False, False))
    b = G.wheel(3, (False, True, False))
    assert G.canonical_form(a) == G.canonical_form(b)
    assert G.canonical_form(a) != G.canonical_form(G.wheel(3))


# -- generate-and-filter oracle ---------------------------------------------


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_bernoulli_matches_oracle(t):
    assert_same_classes(enumerate_bernoulli(t), oracles.oracle_family("B", t))
    assert len(oracles.oracle_family("B", t, keep_order=False)) == 1


@pytest.mark.parametrize("i", [2, 3, 4])
def test_wheels_match_oracle(i):
    assert_same_classes(enumerate_wheels(i, edge_orders=True), oracles.oracle_family("W", i))
    assert_same_classes(enumerate_wheels(i), oracles.oracle_family("W", i, keep_order=False), False)


def test_bw_matches_oracle():
    assert_same_classes(enumerate_bw(4), oracles.oracle_family("BW", 4))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_q_n2_count_matches_oracle(n):
    assert count_q_n2(n) == oracles.oracle_q_n2_count(n)


def test_q_n2_three_is_exactly_the_oracle_set():
    ours = {pairs_of(g) for g in G.iter_q_n2(3)}
    theirs = set(oracles.all_slot_assignments(3, ("F", "G")))
    assert ours == theirs


def test_oracle_filters_are_not_vacuous():
    # a 2-cycle plus a separate tail is neither a wheel nor a BW graph
    pairs = ((2, "F"), (1, "F"), ("F", "inf"))
    assert not oracles.is_wheel(pairs) and not oracles.is_bernoulli_wheel(pairs)
    assert oracles.is_bernoulli(((2, "F"), ("F", "inf")))
