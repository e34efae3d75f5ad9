"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the criterion lines are
written straight to the terminal) or ``python tests/test_acceptance.py``.
Reference oracles here are written from scratch on plain adjacency sets so
they share no code with the package.
"""
from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from itertools import combinations

import pytest

from chiforge.certificate import Certificate
from chiforge.chi_oracles import Oracle
from chiforge.graph_core import Graph, decode_graph6, encode_graph6, find_induced_p5, join
from chiforge.ledger import ledger
from chiforge.p5_generators import GenSpec, complete_graph, cycle, random_composite, random_p5free
from chiforge.structure_lemmas import gyarfas_vertex, phi_eval
from chiforge.blockades import anticonn_or_complete, convert_blockade
from chiforge.procedure import PreconditionError
from chiforge.verifier import FAULTS, plant_dense_violator, plant_fault, verify_certificate
from chiforge.verify_harness import (LEMMAS, extremal_scan, mixed_campaign, replay_certificate, run_campaign,
                                     verify_measure_axioms)

RESULTS = {}


def report(num: int, ok, detail: str, capsys=None) -> None:
    status = "PASS" if ok is True else ("REPORTED" if ok is None else "FAIL")
    line = f"criterion {num:2d}: {status}  {detail}"
    RESULTS[num] = line
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


# ---------------------------------------------------------------------------
# independent references


def adjacency(g: Graph):
    return [set(u for u in range(g.n) if g.has_edge(v, u)) for v in range(g.n)]


def naive_has_p5(g: Graph) -> bool:
    adj = adjacency(g)
    for five in combinations(range(g.n), 5):
        s = set(five)
        deg = sorted(len(adj[v] & s) for v in five)
        if deg != [1, 1, 2, 2, 2]:
            continue
        seen, stack = {five[0]}, [five[0]]
        while stack:
            v = stack.pop()
            for u in adj[v] & s:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) == 5:
            return True
    return False


def colourable(adj, k: int) -> bool:
    n = len(adj)
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    colour = [-1] * n

    def go(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        used = {colour[u] for u in adj[v]}
        for c in range(k):
            if c not in used:
                colour[v] = c
                if go(i + 1):
                    return True
        colour[v] = -1
        return False

    return go(0)


def reference_chi(g: Graph) -> int:
    adj = adjacency(g)
    k = 0
    while not colourable(adj, k):
        k += 1
    return k


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


# ---------------------------------------------------------------------------
# criteria


def test_criterion_01_p5_detector(capsys):
    rng = random.Random(101)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(2000):
        g = gnp(rng.randint(0, 10), rng.random(), rng)
        if (find_induced_p5(g) is not None) != naive_has_p5(g):
            bad += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60
    report(1, ok, f"P5 detector vs all-5-subsets scan: 2000 graphs n<=10, {bad} discrepancies, {dt:.1f}s", capsys)
    assert ok


def test_criterion_02_oracle_exactness(capsys):
    rng = random.Random(202)
    t0 = time.perf_counter()
    mism = sandwich = 0
    for _ in range(500):
        g = gnp(rng.randint(1, 9), rng.random(), rng)
        orc = Oracle(g)
        c, w, a = orc.chi(g.full), orc.omega(g.full), orc.alpha(g.full)
        mism += c != reference_chi(g)
        sandwich += not (w <= c and a * c >= g.n)
    dt = time.perf_counter() - t0
    ok = mism == 0 and sandwich == 0 and dt < 300
    report(2, ok, f"chi vs backtracking oracle: 500 graphs n<=9, {mism} mismatches, "
                  f"{sandwich} omega/alpha violations, {dt:.1f}s", capsys)
    assert ok


def test_criterion_03_gyarfas(capsys):
    rng = random.Random(303)
    passed = total = 0
    while total < 1000:
        g = random_p5free(GenSpec("repair", rng.randint(2, 14), rng.uniform(0.2, 0.9), rng.randrange(1 << 30)))
        if Oracle(g).chi(g.full) < 2:
            continue
        total += 1
        w = gyarfas_vertex(g)
        passed += Fraction(w.chiN, w.chiG) >= Fraction(1, 3) and verify_certificate(g, w.certificate).ok
    c5 = gyarfas_vertex(cycle(5))
    ratio = Fraction(c5.chiN, c5.chiG)
    ok = passed == total and ratio == Fraction(1, 3)
    report(3, ok, f"chi(N(v)) >= chi/3 on {passed}/{total} P5-free graphs n<=14; C5 ratio = {ratio}", capsys)
    assert ok


def test_criterion_04_mixed(capsys):
    checked, bad = mixed_campaign(500, seed=4)
    ok = checked == 500 and not bad
    report(4, ok, f"no vertex mixed on both sides of {checked} connected anticomplete pairs ({len(bad)} violations)",
           capsys)
    assert ok


def test_criterion_05_measure_axioms(capsys):
    rep = verify_measure_axioms(pairs=200, overlapping=500, seed=5)
    counts = ", ".join(f"{k}={v}" for k, v in sorted(rep.checks.items()))
    report(5, rep.ok, f"measure axioms: {counts}; {len(rep.failures)} failures", capsys)
    assert rep.ok


CAMPAIGNS = {}


def _campaigns():
    if not CAMPAIGNS:
        for name in LEMMAS:
            CAMPAIGNS[name] = run_campaign(name, 200, seed=6)
    return CAMPAIGNS


def test_criterion_06_certificate_soundness(capsys):
    reps = _campaigns()
    certs = accepted = 0
    fails, errors, shortfalls = [], [], []
    waiver_texts = set()
    samples = {}
    for name, rep in reps.items():
        for t in rep.trials:
            if t.certificate is not None:
                certs += 1
                accepted += t.verified == "accept"
                cert = Certificate.from_json(t.certificate)
                waiver_texts.update(cert.params.get("waivers", []))
                samples.setdefault((name, cert.kind, cert.bullet), cert)
        if rep.failed:
            fails.append(f"{name}:{rep.failed}")
        if rep.errors:
            errors.append(f"{name}:{rep.errors}")
        if rep.waived:
            shortfalls.append(f"{name}:{rep.waived}")
    # every waiver is a magnitude gate: the verifier re-checks structural hypotheses in both modes
    structural = [w for w in waiver_texts if not _is_magnitude(w)]
    planted = rejected = 0
    for cert in samples.values():
        g = decode_graph6(cert.trace[0]["graph6"])
        for fault in FAULTS:
            planted += 1
            rejected += not verify_certificate(g, plant_fault(cert, fault, g)).ok
        g2, obj, v = plant_dense_violator(g, cert)
        if v is not None:
            planted += 1
            rejected += not verify_certificate(g2, obj).ok
    ok = accepted == certs and not fails and not errors and not structural and rejected == planted
    detail = (f"{len(reps)} ops x 200 instances: {accepted}/{certs} certificates accepted, fail={fails or 0}, "
              f"error={errors or 0}, relaxed shortfalls={shortfalls or 0}, structural waivers={len(structural)}; "
              f"planted faults rejected {rejected}/{planted} over {len(samples)} (op, kind, bullet) samples")
    report(6, ok, detail, capsys)
    assert ok


def _is_magnitude(text: str) -> bool:
    """Waivers name chi-size gates, the partition sizes those gates guarantee, or tiny-parameter ranges."""
    return text.startswith("chi") or "chi(" in text or "partition" in text or "2^-" in text


def test_criterion_07_ledger(capsys):
    led = ledger()
    a1 = 200
    b = 6 * a1 * a1 * a1
    a2 = 16 * b * b + 24 * b
    d = 32 * a2 + 96
    literal = (200, 48_000_000, 36_864_001_152_000_000, 1_179_648_036_864_000_096)
    ok = ((led.a1, led.b_mid, led.a2, led.d) == (a1, b, a2, d) == literal and d >= 160 and not led.check())
    report(7, ok, f"a1={led.a1} b={led.b_mid} a2={led.a2} d={led.d} (d>=160: {led.d >= 160}), "
                  f"independent recomputation matches: {(a1, b, a2, d) == literal}", capsys)
    assert ok


def test_criterion_08_phi_bounds(capsys):
    rng = random.Random(808)
    good = 0
    for _ in range(100):
        c = Fraction(rng.randint(1, 1000), 1000 * 2 ** rng.randint(9, 14))
        s = rng.randint(0, 12)
        r = rng.randint(0, s)
        val = phi_eval(c, r, s)
        good += 1 - 2 * c ** (2 ** (r + 2)) <= val <= 1
    report(8, good == 100, f"phi_(r,s)(c) in [1 - 2c^(2^(r+2)), 1] on {good}/100 samples", capsys)
    assert good == 100


def test_criterion_09_blockade_examples(capsys):
    k12 = complete_graph(12)
    cert = anticonn_or_complete(k12, Fraction(1, 8))
    blocks = [cert.sets[n] for n in sorted(cert.sets, key=lambda s: (len(s), s)) if n[0] == "B" and n[1:].isdigit()]
    orc = Oracle(k12)
    chis = [orc.chi(sum(1 << v for v in b)) for b in blocks]
    first = (verify_certificate(k12, cert).ok and len(blocks) == 6 and len(blocks) ** 2 >= 8
             and all(Fraction(c) >= Fraction(3, 2) for c in chis) and min(chis) == 2)
    rng = random.Random(909)
    fixed = [complete_graph(8), complete_graph(10), join(complete_graph(5), cycle(5)),
             join(join(cycle(5), cycle(5)), complete_graph(2))]
    conv_ok = total = 0
    rejected = []

    def attempt(g):
        c = convert_blockade(g, Fraction(1, 2), 1)
        nb = sum(1 for n in c.sets if n[0] == "B" and n[1:].isdigit())
        return (verify_certificate(g, c).ok and nb >= 2
                and c.params.get("tag") in ("anticomplete", "dense", "anti_or_dense"))

    for g in fixed:
        total += 1
        conv_ok += attempt(g)
    # random draws whose inner blockade hypothesis fails are reported, not counted
    while total < 12:
        g = random_composite(rng.randint(9, 14), rng)
        if Oracle(g).chi(g.full) < 8:
            continue
        try:
            ok_g = attempt(g)
        except PreconditionError:
            rejected.append(encode_graph6(g).decode())
            continue
        total += 1
        conv_ok += ok_g
    ok = first and conv_ok == total
    report(9, ok, f"K12 y=1/8: k={len(blocks)} block chi={chis}, verified={first}; "
                  f"convert eps=1/2 a=1 on {conv_ok}/{total} graphs with chi>=8 (strict mode); "
                  f"{len(rejected)} random draws outside the inner hypothesis: {rejected}", capsys)
    assert ok


def test_criterion_10_determinism(capsys):
    first = _campaigns()
    same_reports = 0
    for name, rep in first.items():
        again = run_campaign(name, 200, seed=6)
        same_reports += again.csv_text() == rep.csv_text() and again.summary() == rep.summary()
    replays = identical = 0
    for rep in first.values():
        for t in rep.trials:
            if t.certificate is not None:
                replays += 1
                identical += replay_certificate(Certificate.from_json(t.certificate)).to_json() == t.certificate
    ok = same_reports == len(first) and identical == replays
    report(10, ok, f"{same_reports}/{len(first)} campaign reruns byte-identical; "
                   f"{identical}/{replays} certificates replay byte-identically", capsys)
    assert ok


def test_criterion_11_extremal_scan(capsys):
    rows, best = extremal_scan(1000, seed=11, extra=[cycle(5)])
    c5 = encode_graph6(cycle(5)).decode()
    c5_rows = [r for r in rows if r.graph6 == c5]
    c5_ok = bool(c5_rows) and math.isclose(c5_rows[0].exponent, math.log(3) / math.log(2))
    dist = {}
    for r in rows:
        dist[(r.omega, r.chi)] = dist.get((r.omega, r.chi), 0) + 1
    table = " ".join(f"(w={w},chi={c}):{k}" for (w, c), k in sorted(dist.items()))
    report(11, None, f"{len(rows)} instances, max exponent {best.exponent:.4f} at {best.graph6}; "
                     f"C5 exponent {c5_rows[0].exponent:.4f} present={c5_ok}; table {table}", capsys)
    assert c5_ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
