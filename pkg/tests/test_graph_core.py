from __future__ import annotations

import pytest
from hypothesis import given, settings

from chiforge.graph_core import (Graph, GraphError, PairKind, classify_pair, components, decode_graph6,
                                 disjoint_union, encode_graph6, find_induced_p5, from_iter, induced, is_anticonnected,
                                 is_connected, join, mixed_on, size, to_list)
from chiforge.p5_generators import complete_graph, cycle, path

from conftest import graphs, naive_p5


@given(graphs(max_n=12))
def test_graph6_round_trip(g):
    assert decode_graph6(encode_graph6(g)) == g


def test_graph6_known_strings():
    assert encode_graph6(cycle(5)).decode() == "Dhc"
    assert decode_graph6("A_") == Graph.from_edges(2, [(0, 1)])


@pytest.mark.parametrize("bad", ["", "~", "A", "C~~~~"])
def test_graph6_rejects_malformed(bad):
    with pytest.raises(GraphError):
        decode_graph6(bad)


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(2, (2, 0))
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 5)])


@given(graphs())
def test_complement_is_involution(g):
    h = g.complement()
    assert h.complement() == g
    assert g.edge_count() + h.edge_count() == g.n * (g.n - 1) // 2


@given(graphs())
def test_components_partition_the_set(g):
    for mode in ("connected", "anticonnected"):
        parts = components(g, g.full, mode)
        union = 0
        for p in parts:
            assert p and not union & p
            union |= p
        assert union == g.full


@given(graphs())
def test_anticomponents_are_anticonnected(g):
    for p in components(g, g.full, "anticonnected"):
        assert is_anticonnected(g, p)


@given(graphs())
def test_components_are_connected_and_separated(g):
    parts = components(g, g.full)
    for i, p in enumerate(parts):
        assert is_connected(g, p)
        for other in parts[i + 1:]:
            assert classify_pair(g, p, other) is PairKind.ANTICOMPLETE


def test_classify_pair_on_join():
    g = join(cycle(5), path(2))
    left, right = from_iter(range(5)), from_iter([5, 6])
    assert classify_pair(g, left, right) is PairKind.COMPLETE
    h = disjoint_union(cycle(5), path(2))
    assert classify_pair(h, left, right) is PairKind.ANTICOMPLETE
    assert classify_pair(cycle(5), 1, 0b110) is PairKind.MIXED


def test_mixed_on():
    g = path(3)
    assert mixed_on(g, 1, 0b101) == "pure-complete"
    assert mixed_on(g, 0, 0b100) == "pure-anticomplete"
    assert mixed_on(g, 0, 0b110) == "mixed"
    with pytest.raises(GraphError):
        mixed_on(g, 0, 0b001)


@settings(max_examples=200)
@given(graphs(max_n=8))
def test_p5_finder_matches_naive_scan(g):
    wit = find_induced_p5(g)
    assert (wit is not None) == naive_p5(g)
    if wit is not None:
        assert induced(g, from_iter(wit)).edge_count() == 4


def test_p5_examples():
    assert find_induced_p5(path(5)) is not None
    assert find_induced_p5(cycle(5)) is None
    assert find_induced_p5(cycle(6)) is not None
    assert find_induced_p5(complete_graph(6)) is None


def test_bit_helpers():
    assert to_list(0b10110) == [1, 2, 4]
    assert from_iter([4, 2, 1]) == 0b10110
    assert size(0b10110) == 3
