from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from chiforge.chi_oracles import EHFailure, Oracle, P5Found, TooLarge, eh_extract, verify_coloring
from chiforge.graph_core import Graph, from_iter, size
from chiforge.p5_generators import complete_graph, cycle, path

from conftest import brute_chi, graphs


@settings(max_examples=150)
@given(graphs(max_n=8))
def test_chi_matches_backtracking(g):
    orc = Oracle(g)
    assert orc.chi() == brute_chi(g)


@settings(max_examples=150)
@given(graphs(max_n=8))
def test_colouring_witness_is_proper(g):
    wit = Oracle(g).coloring()
    assert wit.k == Oracle(g).chi()
    assert verify_coloring(g, g.full, wit)


@given(graphs(max_n=8))
def test_clique_and_stable_witnesses(g):
    orc = Oracle(g)
    cl, st = orc.clique(), orc.stable()
    assert all(g.has_edge(u, v) for u in range(g.n) for v in range(g.n) if u != v and cl >> u & 1 and cl >> v & 1)
    assert not any(g.has_edge(u, v) for u in range(g.n) for v in range(g.n) if st >> u & 1 and st >> v & 1)
    assert orc.omega() == size(cl) <= orc.chi()
    assert orc.chi() * orc.alpha() >= g.n


@given(graphs(max_n=7))
def test_chi_of_subsets_is_monotone(g):
    orc = Oracle(g)
    half = from_iter(range(0, g.n, 2))
    assert orc.chi(half) <= orc.chi()
    assert orc.chi(0) == 0


def test_known_values():
    assert Oracle(cycle(5)).chi() == 3
    assert Oracle(complete_graph(6)).chi() == 6
    assert Oracle(Graph.empty(4)).chi() == 1
    assert Oracle(path(4)).omega() == 2


def test_budget_guard(monkeypatch):
    monkeypatch.setenv("CHIFORGE_SOLVE_BUDGET", "3")
    with pytest.raises(TooLarge):
        Oracle(complete_graph(5)).chi()


def test_density_checks():
    k6 = complete_graph(6)
    orc = Oracle(k6)
    assert orc.is_dense(k6.full, Fraction(1, 4))
    e = Graph.empty(4)
    assert not Oracle(e).is_dense(e.full, Fraction(1, 2))
    assert orc.is_dense_to(0b000111, 0b111000, Fraction(1, 8))
    with pytest.raises(ValueError):
        orc.density_check(k6.full, 0)


def test_extremal_extraction():
    wit = eh_extract(complete_graph(9), 2)
    assert wit.size == 9
    with pytest.raises(P5Found):
        eh_extract(path(5), 2)
    with pytest.raises(EHFailure):
        eh_extract(cycle(5), 1)
