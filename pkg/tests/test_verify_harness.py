from __future__ import annotations

import csv
import io
import math

from chiforge.certificate import Certificate
from chiforge.graph_core import join
from chiforge.p5_generators import complete_graph, cycle, path
from chiforge.verify_harness import (LEMMAS, chi_omega_exponent, extremal_scan, invoke, is_p5_free_naive,
                                     mixed_campaign, replay_certificate, replay_counterexample, run_campaign,
                                     save_counterexample, scan_csv, verify_measure_axioms)


def test_all_operations_are_registered():
    assert len(LEMMAS) == 20
    assert all(e.mode in ("strict", "relaxed") for e in LEMMAS.values())


def test_campaign_is_deterministic_and_consistent():
    a = run_campaign("round1", 20, seed=5)
    b = run_campaign("round1", 20, seed=5)
    assert a.csv_text() == b.csv_text()
    assert a.summary() == b.summary()
    assert a.consistent


def test_campaign_csv_has_one_row_per_trial():
    rep = run_campaign("gyarfas", 10, seed=1)
    rows = list(csv.DictReader(io.StringIO(rep.csv_text())))
    assert len(rows) == 10
    assert all(r["millis"] == "" for r in rows)


def test_parallel_campaign_matches_serial():
    serial = run_campaign("rodl_chi", 12, seed=3)
    parallel = run_campaign("rodl_chi", 12, seed=3, workers=2)
    assert serial.csv_text() == parallel.csv_text()


def test_certificates_replay_identically():
    rep = run_campaign("anti_or_dense", 10, seed=2)
    certs = [t.certificate for t in rep.trials if t.certificate]
    assert certs
    for text in certs:
        assert replay_certificate(Certificate.from_json(text)).to_json() == text


def test_invoke_and_counterexample_round_trip(tmp_path):
    g = join(cycle(5), cycle(5))
    cert = invoke("main_trichotomy", g, {}, {}, "relaxed")
    assert cert.kind == "blockade"
    base = save_counterexample(str(tmp_path), "sample", g, "main_trichotomy", {}, {}, "relaxed", "demo")
    res = replay_counterexample(base + ".json")
    assert res.tag == "pass" and res.verified == "accept"


def test_counterexample_for_p5_input_is_an_error(tmp_path):
    base = save_counterexample(str(tmp_path), "bad", path(5), "main_trichotomy", {}, {}, "relaxed", "p5")
    assert replay_counterexample(base).tag == "error"


def test_measure_axioms_hold():
    rep = verify_measure_axioms(20, 40, seed=4)
    assert rep.ok


def test_mixed_vertex_campaign_is_clean():
    checked, bad = mixed_campaign(40, seed=4)
    assert checked == 40 and bad == []


def test_exponent_and_scan():
    assert chi_omega_exponent(3, 2) == math.log(3) / math.log(2)
    assert chi_omega_exponent(4, 4) == 1.0
    assert chi_omega_exponent(1, 1) is None
    rows, best = extremal_scan(30, seed=9, extra=[cycle(5)])
    assert len(rows) == 31 and rows[0].graph6 == "Dhc"
    assert best.exponent == max(r.exponent for r in rows if r.exponent is not None)
    assert scan_csv(rows).count("\n") == len(rows) + 1


def test_naive_p5_check():
    assert not is_p5_free_naive(path(5))
    assert is_p5_free_naive(cycle(5))
    assert is_p5_free_naive(complete_graph(6))
