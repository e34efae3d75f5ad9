from __future__ import annotations

import json
from fractions import Fraction

import pytest

from chiforge import blockades as bl, structure_lemmas as sl
from chiforge.certificate import Certificate
from chiforge.graph_core import encode_graph6, join
from chiforge.p5_generators import complete_graph, cycle, path
from chiforge.verifier import FAULTS, plant_dense_violator, plant_fault, verify_certificate


def samples():
    c5c5 = join(cycle(5), cycle(5))
    return [
        (cycle(5), sl.gyarfas_vertex(cycle(5)).certificate),
        (complete_graph(8), sl.rodl_chi(complete_graph(8), Fraction(1, 4))),
        (c5c5, sl.anti_or_dense(c5c5, 5, Fraction(1, 512), "relaxed")),
        (complete_graph(12), bl.anticonn_or_complete(complete_graph(12), Fraction(1, 8))),
        (c5c5, bl.main_trichotomy(c5c5, "relaxed")),
    ]


@pytest.mark.parametrize("idx", range(5))
def test_honest_certificates_are_accepted(idx):
    g, cert = samples()[idx]
    assert verify_certificate(g, cert).ok
    assert verify_certificate(g, cert.to_json()).ok


@pytest.mark.parametrize("fault", sorted(FAULTS))
def test_every_planted_fault_is_rejected(fault):
    for g, cert in samples():
        verdict = verify_certificate(g, plant_fault(cert, fault, g))
        assert verdict.status == "reject", (fault, cert.lemma)


def test_dense_violator_is_rejected():
    g, cert = samples()[1]
    g2, obj, v = plant_dense_violator(g, cert)
    assert v == g.n
    assert verify_certificate(g2, obj).status == "reject"


def test_wrong_graph_is_rejected():
    g, cert = samples()[1]
    assert not verify_certificate(complete_graph(9), cert).ok


def test_claim_threshold_must_match_the_statement():
    g, cert = samples()[3]
    obj = json.loads(cert.to_json())
    # lower every block threshold: each claim still holds but no longer matches the required bound
    lowered = 0
    for c in obj["claims"]:
        if c["rel"] == ">=" and c["meaning"].startswith("chi(B"):
            c["rhs"] = "1/2"
            lowered += 1
    assert lowered
    verdict = verify_certificate(g, obj)
    assert verdict.status == "reject"


def test_ground_graph_with_p5_is_rejected():
    g, cert = samples()[0]
    obj = json.loads(cert.to_json())
    p5 = path(5)
    obj["trace"][0]["graph6"] = encode_graph6(p5).decode()
    assert not verify_certificate(p5, obj).ok


def test_certificate_json_round_trip():
    _, cert = samples()[2]
    assert Certificate.from_json(cert.to_json()).to_json() == cert.to_json()
