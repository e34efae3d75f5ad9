from __future__ import annotations

from fractions import Fraction

import pytest

from chiforge import blockades as bl
from chiforge.chi_oracles import Oracle
from chiforge.graph_core import PairKind, classify_pair, join
from chiforge.p5_generators import complete_graph, cycle
from chiforge.procedure import GateError, PreconditionError
from chiforge.verifier import verify_certificate
from chiforge.verify_harness import run_campaign


def blocks(cert):
    names = sorted((n for n in cert.sets if n[0] == "B" and n[1:].isdigit()), key=lambda n: int(n[1:]))
    return [cert.mask(n) for n in names]


def test_complete_blockade_on_clique():
    g = complete_graph(12)
    cert = bl.anticonn_or_complete(g, Fraction(1, 8))
    bs = blocks(cert)
    assert len(bs) == 6
    assert all(classify_pair(g, a, b) is PairKind.COMPLETE for i, a in enumerate(bs) for b in bs[i + 1:])
    assert verify_certificate(g, cert).ok


def test_conversion_finds_balanced_join_split():
    g = join(join(cycle(5), cycle(5)), complete_graph(2))
    cert = bl.convert_blockade(g, Fraction(1, 2), 1)
    orc = Oracle(g)
    assert all(2 * orc.chi(b) >= orc.chi() for b in blocks(cert)[:2])
    assert verify_certificate(g, cert).ok


def test_conversion_reports_unmet_inner_hypothesis():
    # two complete blocks of chi >= 6 would need chi >= 12
    with pytest.raises(PreconditionError):
        bl.convert_blockade(complete_graph(11), Fraction(1, 2), 1)


def test_magnitude_gate_is_strict_by_default():
    with pytest.raises(GateError):
        bl.main_trichotomy(join(cycle(5), cycle(5)))


def test_trichotomy_relaxed_gives_verified_blockade():
    g = join(cycle(5), cycle(5))
    cert = bl.main_trichotomy(g, "relaxed")
    assert cert.kind == "blockade"
    assert verify_certificate(g, cert).ok


def test_pattern_graph_of_join_is_complete():
    g = join(cycle(5), cycle(5))
    pat = bl.pattern_graph(g, [0b11111, 0b1111100000])
    assert pat.n == 2 and pat.has_edge(0, 1)


@pytest.mark.parametrize("name", ["convert_blockade", "midway_blockade", "anticomplete_extract", "averaged_extract",
                                  "anticonn_or_complete", "incre2_step", "round2", "main_trichotomy"])
def test_small_campaign_has_no_failures(name):
    rep = run_campaign(name, 25, seed=103)
    assert rep.consistent
    assert rep.failed == 0 and rep.errors == 0
