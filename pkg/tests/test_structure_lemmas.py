from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chiforge import structure_lemmas as sl
from chiforge.chi_oracles import Oracle, P5Found
from chiforge.graph_core import join
from chiforge.p5_generators import complete_graph, cycle, path
from chiforge.verifier import verify_certificate
from chiforge.verify_harness import run_campaign


def test_neighbourhood_vertex_on_c5():
    wit = sl.gyarfas_vertex(cycle(5))
    assert (wit.chiN, wit.chiG) == (1, 3)
    assert verify_certificate(cycle(5), wit.certificate).ok


def test_neighbourhood_vertex_rejects_p5():
    with pytest.raises(P5Found):
        sl.gyarfas_vertex(path(5))


@pytest.mark.parametrize("g", [complete_graph(8), join(cycle(5), cycle(5)), cycle(5)])
def test_dense_subgraph_certificates_verify(g):
    for cert in (sl.rodl_chi(g, Fraction(1, 4)), sl.pure_or_dense(g, Fraction(1, 4), Fraction(1, 2048))):
        assert verify_certificate(g, cert).ok


def test_dense_subgraph_is_actually_dense():
    g = complete_graph(8)
    cert = sl.rodl_chi(g, Fraction(1, 4))
    f = cert.mask("F")
    assert Oracle(g).is_dense(f, Fraction(1, 4))


def test_balanced_pair_from_join():
    g = join(cycle(5), cycle(5))
    cert = sl.anti_or_dense(g, 5, Fraction(1, 512), "relaxed")
    assert cert.kind == "complete_pair"
    assert verify_certificate(g, cert).ok


@given(st.fractions(Fraction(1, 64), Fraction(1, 2)), st.integers(0, 3), st.integers(0, 3))
def test_phi_stays_in_its_bounds(c, r, extra):
    s = r + extra
    val = sl.phi_eval(c, r, s)
    assert 1 - 2 * c ** (2 ** (r + 2)) <= val <= 1


def test_phi_rejects_reversed_range():
    with pytest.raises(Exception):
        sl.phi_eval(Fraction(1, 4), 3, 1)


def test_mixed_invariant_holds_on_samples():
    assert sl.mixed_invariant_scan(cycle(5)) is None
    assert sl.mixed_invariant_scan(join(cycle(5), complete_graph(3))) is None


@pytest.mark.parametrize("name", ["gyarfas", "bip_trichotomy", "pure_or_dense", "rodl_chi", "decompose_anti",
                                  "grow_anticomplete", "anti_or_dense"])
def test_small_campaign_has_no_failures(name):
    rep = run_campaign(name, 25, seed=101)
    assert rep.consistent
    assert rep.failed == 0 and rep.errors == 0
    assert rep.passed + rep.waived == 25
