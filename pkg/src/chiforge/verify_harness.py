"""Campaigns, replay, measure-axiom suites and the chi-vs-omega scan.

Every registered operation has a generator that draws inputs satisfying the
operation's structural hypotheses and a caller that invokes it from a
parameter dict.  The same caller drives replay, so a certificate's first
trace entry plus its input sets is enough to rebuild it.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from . import blockades as bl
from . import density_increment as di
from . import structure_lemmas as sl
from .certificate import Certificate
from .chi_oracles import Oracle, P5Found, TooLarge
from .exact import q
from .graph_core import (Graph, bits, components, decode_graph6, disjoint_union, encode_graph6, from_iter, induced,
                         join, size, to_list)
from .p5_generators import GenSpec, complete_graph, complete_multipartite, random_composite, random_p5free
from .procedure import GateError, LemmaFailure, PreconditionError, RelaxedShortfall
from .verifier import Verdict, verify_certificate

CSV_COLUMNS = ("instance_id", "graph6", "lemma", "mode", "outcome_tag", "verified", "millis")
MAX_CANDIDATES = 60


@dataclass
class Case:
    """One campaign input: graph, parameters and named input sets."""

    g: Graph
    params: Dict[str, Any]
    inputs: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class LemmaEntry:
    name: str
    make: Callable[[random.Random], Optional[Case]]
    call: Callable[[Graph, Dict[str, Any], Dict[str, int], str], Certificate]
    mode: str = "relaxed"


# ---------------------------------------------------------------------------
# instance helpers


def _random_graph(rng: random.Random, lo: int = 4, hi: int = 12) -> Graph:
    n = rng.randint(lo, hi)
    if rng.random() < 0.5:
        return random_composite(n, rng)
    return random_p5free(GenSpec("repair", n, rng.uniform(0.25, 0.8), rng.randrange(1 << 30)))


def _joined(rng: random.Random, parts: int, piece_max: int) -> Tuple[Graph, List[int]]:
    """Join of small random P5-free pieces; returns the graph and the piece masks."""
    g = Graph.empty(0)
    masks = []
    for _ in range(parts):
        h = random_composite(rng.randint(1, piece_max), rng)
        masks.append(((1 << h.n) - 1) << g.n)
        g = join(g, h)
    return g, masks


def _subset(rng: random.Random, mask: int, p: float = 0.5) -> int:
    out = 0
    for v in bits(mask):
        if rng.random() < p:
            out |= 1 << v
    return out


def _frac(x) -> Fraction:
    return q(x)


def _pow2(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(1, 2 ** rng.randint(lo, hi))


def _max_nonnbr_chi(orc: Oracle, a: int, b: int) -> int:
    g = orc.g
    return max(orc.chi(a & ~g.nbrs(u)) for u in bits(b))


# ---------------------------------------------------------------------------
# generators and callers, one pair per operation


def _make_gyarfas(rng):
    g = _random_graph(rng, 3, 14)
    if Oracle(g).chi(g.full) < 2:
        return None
    return Case(g, {})


def _call_gyarfas(g, p, i, mode):
    return sl.gyarfas_vertex(g, i.get("in_G")).certificate


def _vab_case(rng) -> Optional[Tuple[Graph, int, int, int]]:
    g = _random_graph(rng, 5, 12)
    v = rng.randrange(g.n)
    a = g.nbrs(v)
    b = g.full & ~g.closed(v)
    if not a or not b:
        return None
    return g, v, a, b


def _make_bip(rng):
    got = _vab_case(rng)
    if got is None:
        return None
    g, v, a, b = got
    eps = rng.choice((Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)))
    orc = Oracle(g)
    bound = eps * orc.chi(a)
    b = from_iter(u for u in bits(b) if orc.chi(a & ~g.nbrs(u)) < bound)
    if not b:
        return None
    return Case(g, {"v": v, "eps": eps}, {"in_A": a, "in_B": b})


def _call_bip(g, p, i, mode):
    return sl.bip_trichotomy(g, p["v"], i["in_A"], i["in_B"], _frac(p["eps"]), mode)


def _make_pure_or_dense(rng):
    g = _random_graph(rng, 2, 12)
    eps = rng.choice((Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)))
    return Case(g, {"eps": eps, "delta": eps * eps / 128})


def _call_pure_or_dense(g, p, i, mode):
    return sl.pure_or_dense(g, _frac(p["eps"]), _frac(p["delta"]), i.get("in_G"), mode)


def _make_rodl(rng):
    g = _random_graph(rng, 2, 12)
    return Case(g, {"eps": rng.choice((Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)))})


def _call_rodl(g, p, i, mode):
    return sl.rodl_chi(g, _frac(p["eps"]), i.get("in_G"), mode)


def _make_decompose(rng):
    g = _random_graph(rng, 3, 12)
    c = Oracle(g).chi(g.full)
    eps = rng.choice((Fraction(1, 4), Fraction(1, 8)))
    top = (1 - eps * eps) * c
    if top < 1:
        return None
    qv = Fraction(rng.randint(1, math.floor(top)))
    p = Fraction(rng.randint(1, int(qv)))
    return Case(g, {"eps": eps, "p": p, "q": qv})


def _call_decompose(g, p, i, mode):
    return sl.decompose_anti(g, _frac(p["eps"]), _frac(p["p"]), _frac(p["q"]), i.get("in_G"), mode)


def _make_grow(rng):
    g = _random_graph(rng, 2, 12)
    return Case(g, {"c": _pow2(rng, 9, 12), "s": rng.randint(0, 3)})


def _call_grow(g, p, i, mode):
    return sl.grow_anticomplete(g, _frac(p["c"]), int(p["s"]), i.get("in_G"), mode)


def _make_anti_or_dense(rng):
    g = _random_graph(rng, 2, 12)
    if Oracle(g).chi(g.full) < 2:
        return None
    return Case(g, {"a": rng.randint(5, 8), "c": _pow2(rng, 9, 12)})


def _call_anti_or_dense(g, p, i, mode):
    return sl.anti_or_dense(g, int(p["a"]), _frac(p["c"]), mode, i.get("in_G"))


def _make_avg(rng):
    got = _vab_case(rng)
    if got is None:
        return None
    g, v, a, b = got
    orc = Oracle(g)
    r = max(1, _max_nonnbr_chi(orc, a, b))
    qn = max(1, orc.chi(a) // r)
    qn = rng.randint(1, qn)
    y = Fraction(1, 2 * qn * rng.randint(1, 3))
    return Case(g, {"v": v, "r": Fraction(r), "y": y, "q": qn}, {"in_A": a, "in_B": b})


def _call_avg(g, p, i, mode):
    return di.avg_p5(g, p["v"], i["in_A"], i["in_B"], _frac(p["r"]), _frac(p["y"]), int(p["q"]), mode)


def _dense_vab(rng) -> Optional[Tuple[Graph, int, int, int]]:
    """v, B among non-neighbours, A the neighbours of v complete to B."""
    got = _vab_case(rng)
    if got is None:
        return None
    g, v, a, b = got
    b = _subset(rng, b, 0.6) or (b & -b)
    a = from_iter(u for u in bits(a) if b & ~g.nbrs(u) == 0)
    if not a:
        return None
    return g, v, a, b


def _xy(rng) -> Tuple[Fraction, Fraction]:
    y = _pow2(rng, 8, 10)
    return y * Fraction(1, 2 ** rng.randint(0, 2)), y


def _make_shrink(rng):
    got = _dense_vab(rng)
    if got is None:
        return None
    g, v, a, b = got
    x, y = _xy(rng)
    return Case(g, {"v": v, "x": x, "y": y}, {"in_A": a, "in_B": b})


def _call_shrink(g, p, i, mode):
    return di.dense_shrink(g, p["v"], i["in_A"], i["in_B"], _frac(p["x"]), _frac(p["y"]), mode)


def _make_combine(rng):
    got = _dense_vab(rng)
    if got is None:
        return None
    g, v, a, b = got
    x, y = _xy(rng)
    # A is complete to B, so any positive r bounds the non-neighbourhoods; keep chi(A) >= q r
    r = Fraction(Oracle(g).chi(a), di.combine_q(y) * rng.randint(1, 3))
    return Case(g, {"v": v, "r": r, "x": x, "y": y}, {"in_A": a, "in_B": b})


def _call_combine(g, p, i, mode):
    return di.dense_combine(g, p["v"], i["in_A"], i["in_B"], _frac(p["r"]), _frac(p["x"]), _frac(p["y"]), mode)


def _make_incre1(rng):
    # at desk scale only complete graphs are (y, chi)-dense for y <= 1/256
    g = complete_graph(rng.randint(1, 14))
    y = Fraction(1, 4 ** rng.randint(4, 5))
    return Case(g, {"x": y / rng.choice((1, 2, 4)), "y": y})


def _call_incre1(g, p, i, mode):
    return di.incre1_step(g, _frac(p["x"]), _frac(p["y"]), mode, i.get("in_G"))


def _make_round1(rng):
    g = _random_graph(rng, 2, 12)
    return Case(g, {"x": rng.choice((Fraction(1, 3), Fraction(1, 4), Fraction(1, 8)))})


def _call_round1(g, p, i, mode):
    return di.round1(g, _frac(p["x"]), mode, i.get("in_G"))


def _make_convert(rng):
    g = _random_graph(rng, 4, 12)
    return Case(g, {"eps": rng.choice((Fraction(1, 2), Fraction(1, 4))), "a": 1})


def _call_convert(g, p, i, mode):
    return bl.convert_blockade(g, _frac(p["eps"]), int(p["a"]), None, mode, i.get("in_G"))


def _make_midway(rng):
    g = _random_graph(rng, 2, 12)
    return Case(g, {"eps": rng.choice((Fraction(1, 2), Fraction(1, 3))), "b": 6})


def _call_midway(g, p, i, mode):
    b = None if mode == "strict" else int(p["b"])
    return bl.midway_blockade(g, _frac(p["eps"]), b, mode, i.get("in_G"))


def _extract_parts(rng, g: Graph, k_max: int) -> Optional[Tuple[List[int], int]]:
    """Pairwise anticomplete anticonnected B sets and the vertices left over."""
    t = _subset(rng, g.full, 0.5)
    bs = [c for c in components(g, t) if size(c) == 1 or len(components(g, c, "anticonnected")) == 1]
    rng.shuffle(bs)
    bs = bs[:rng.randint(1, k_max)]
    if not bs:
        return None
    rest = g.full & ~from_iter(v for m in bs for v in bits(m))
    # drop vertices of the remainder that are mixed on two B sets
    ok = 0
    for v in bits(rest):
        if sum(1 for m in bs if g.nbrs(v) & m and g.nbrs(v) & m != m) <= 1:
            ok |= 1 << v
    return sorted(bs), ok


def _extract_inputs(a_sets: List[int], bs: List[int]) -> Dict[str, int]:
    out = {}
    if len(a_sets) == 1:
        out["in_A"] = a_sets[0]
    else:
        out.update({f"in_A{j + 1}": m for j, m in enumerate(a_sets)})
    out.update({f"in_B{j + 1}": m for j, m in enumerate(bs)})
    return out


def _numbered(inputs: Dict[str, int], prefix: str) -> List[int]:
    out = []
    j = 1
    while f"{prefix}{j}" in inputs:
        out.append(inputs[f"{prefix}{j}"])
        j += 1
    return out


def _make_extract(rng):
    g = _random_graph(rng, 4, 12)
    got = _extract_parts(rng, g, 4)
    if got is None:
        return None
    bs, rest = got
    a = _subset(rng, rest, 0.7)
    if not a:
        return None
    orc = Oracle(g)
    r = max(1, max(orc.chi(a & ~g.nbrs(u)) for m in bs for u in bits(m)))
    g, mapping = _trim(g, a | from_iter(v for m in bs for v in bits(m)))
    return Case(g, {"r": Fraction(r)}, _extract_inputs([mapping(a)], [mapping(m) for m in bs]))


def _trim(g: Graph, keep: int):
    """Induced subgraph on keep, with a mask relabeller (the ground set must be the union of inputs)."""
    order = to_list(keep)
    pos = {v: i for i, v in enumerate(order)}

    def mapping(m: int) -> int:
        return from_iter(pos[v] for v in bits(m))

    return induced(g, keep), mapping


def _call_extract(g, p, i, mode):
    return bl.anticomplete_extract(g, i["in_A"], _numbered(i, "in_B"), _frac(p["r"]), mode)


def _make_averaged(rng):
    g = _random_graph(rng, 5, 12)
    got = _extract_parts(rng, g, 3)
    if got is None:
        return None
    bs, rest = got
    ell = rng.randint(1, 3)
    a_sets = [0] * ell
    for v in bits(rest):
        j = rng.randrange(ell + 1)
        if j < ell:
            a_sets[j] |= 1 << v
    a_sets = [m for m in a_sets if m]
    if not a_sets:
        return None
    orc = Oracle(g)
    rs = [Fraction(max(1, max(orc.chi(a & ~g.nbrs(u)) for m in bs for u in bits(m)))) for a in a_sets]
    keep = from_iter(v for m in a_sets + bs for v in bits(m))
    g, mapping = _trim(g, keep)
    a_sets = [mapping(m) for m in a_sets]
    bs = [mapping(m) for m in bs]
    inputs = {f"in_A{j + 1}": m for j, m in enumerate(a_sets)}
    inputs.update({f"in_B{j + 1}": m for j, m in enumerate(bs)})
    return Case(g, {"r": rs}, inputs)


def _call_averaged(g, p, i, mode):
    return bl.averaged_extract(g, _numbered(i, "in_A"), _numbered(i, "in_B"), [_frac(r) for r in p["r"]], mode)


def _make_anticonn(rng):
    # joins of small pieces keep every anticomponent below y chi(G)
    g, _ = _joined(rng, rng.randint(9, 14), 2)
    return Case(g, {"y": Fraction(1, 8)})


def _call_anticonn(g, p, i, mode):
    return bl.anticonn_or_complete(g, _frac(p["y"]), mode, i.get("in_G"))


def _make_incre2(rng):
    # at desk scale a (y, chi)-dense blockade with y <= 1/256 is a join of its blocks
    g, masks = _joined(rng, rng.randint(4, 6), 3)
    return Case(g, {"y": Fraction(1, 256), "b": 6}, {f"in_A{j + 1}": m for j, m in enumerate(masks)})


def _call_incre2(g, p, i, mode):
    b = None if mode == "strict" else int(p["b"])
    return bl.incre2_step(g, _numbered(i, "in_A"), _frac(p["y"]), b, mode)


def _make_round2(rng):
    # eps-dense for eps = 1/16 needs every closed non-neighbourhood below chi/16
    parts = [rng.choice((1, 1, 1, 2)) for _ in range(rng.randint(17, 20))]
    g = complete_multipartite(parts) if rng.random() < 0.7 else complete_graph(rng.randint(17, 20))
    return Case(g, {"eps": Fraction(1, 16)})


def _call_round2(g, p, i, mode):
    return bl.round2(g, _frac(p["eps"]), mode, i.get("in_G"))


def _make_main(rng):
    g = _random_graph(rng, 2, 12)
    if Oracle(g).chi(g.full) < 2:
        return None
    return Case(g, {})


def _call_main(g, p, i, mode):
    return bl.main_trichotomy(g, mode, i.get("in_G"))


LEMMAS: Dict[str, LemmaEntry] = {e.name: e for e in (
    LemmaEntry("gyarfas", _make_gyarfas, _call_gyarfas, "strict"),
    LemmaEntry("bip_trichotomy", _make_bip, _call_bip, "strict"),
    LemmaEntry("pure_or_dense", _make_pure_or_dense, _call_pure_or_dense, "strict"),
    LemmaEntry("rodl_chi", _make_rodl, _call_rodl, "strict"),
    LemmaEntry("decompose_anti", _make_decompose, _call_decompose, "strict"),
    LemmaEntry("grow_anticomplete", _make_grow, _call_grow, "relaxed"),
    LemmaEntry("anti_or_dense", _make_anti_or_dense, _call_anti_or_dense, "relaxed"),
    LemmaEntry("avg_p5", _make_avg, _call_avg, "strict"),
    LemmaEntry("dense_shrink", _make_shrink, _call_shrink, "relaxed"),
    LemmaEntry("dense_combine", _make_combine, _call_combine, "relaxed"),
    LemmaEntry("incre1_step", _make_incre1, _call_incre1, "relaxed"),
    LemmaEntry("round1", _make_round1, _call_round1, "relaxed"),
    LemmaEntry("convert_blockade", _make_convert, _call_convert, "relaxed"),
    LemmaEntry("midway_blockade", _make_midway, _call_midway, "relaxed"),
    LemmaEntry("anticomplete_extract", _make_extract, _call_extract, "strict"),
    LemmaEntry("averaged_extract", _make_averaged, _call_averaged, "strict"),
    LemmaEntry("anticonn_or_complete", _make_anticonn, _call_anticonn, "strict"),
    LemmaEntry("incre2_step", _make_incre2, _call_incre2, "relaxed"),
    LemmaEntry("round2", _make_round2, _call_round2, "relaxed"),
    LemmaEntry("main_trichotomy", _make_main, _call_main, "relaxed"),
)}


def lemma_entry(name: str) -> LemmaEntry:
    try:
        return LEMMAS[name]
    except KeyError:
        raise KeyError(f"unknown lemma {name!r}; known: {', '.join(sorted(LEMMAS))}") from None


def _params_in(params: Dict[str, Any]) -> Dict[str, Any]:
    return json.loads(json.dumps(params, default=str))


def invoke(name: str, g: Graph, params: Dict[str, Any], inputs: Dict[str, int], mode: Optional[str] = None) -> Certificate:
    """Run a registered operation from JSON-style parameters and input masks."""
    entry = lemma_entry(name)
    return entry.call(g, _params_in(params), inputs, mode or entry.mode)


# ---------------------------------------------------------------------------
# replay


def certificate_inputs(cert: Certificate) -> Dict[str, int]:
    return {k: from_iter(v) for k, v in cert.sets.items() if k.startswith("in_")}


def replay_certificate(cert: Certificate) -> Certificate:
    """Rebuild a certificate from its first trace entry and its input sets."""
    head = cert.trace[0]
    g = decode_graph6(head["graph6"])
    return invoke(head["lemma"], g, head["params"], certificate_inputs(cert), head["mode"])


def save_counterexample(directory: str, tag: str, g: Graph, lemma: str, params: Dict[str, Any],
                        inputs: Dict[str, int], mode: str, reason: str) -> str:
    os.makedirs(directory, exist_ok=True)
    base = os.path.join(directory, tag)
    with open(base + ".g6", "w") as fh:
        fh.write(encode_graph6(g).decode() + "\n")
    side = {"lemma": lemma, "mode": mode, "params": _params_in(params),
            "inputs": {k: to_list(v) for k, v in inputs.items()}, "reason": reason}
    with open(base + ".json", "w") as fh:
        json.dump(side, fh, sort_keys=True, indent=1)
    return base


def replay_counterexample(base: str) -> "TrialResult":
    """Re-run a stored counterexample (graph6 file plus JSON sidecar)."""
    if base.endswith(".g6") or base.endswith(".json"):
        base = base.rsplit(".", 1)[0]
    with open(base + ".g6") as fh:
        g = decode_graph6(fh.read().strip())
    with open(base + ".json") as fh:
        side = json.load(fh)
    case = Case(g, side["params"], {k: from_iter(v) for k, v in side["inputs"].items()})
    return _run_case(side["lemma"], case, side["mode"], 0)


# ---------------------------------------------------------------------------
# campaigns


@dataclass
class TrialResult:
    instance_id: int
    graph6: str
    lemma: str
    mode: str
    tag: str  # pass | fail | error | waived
    verified: str  # accept | reject | too_large | ""
    detail: str
    millis: float
    params: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, int] = field(default_factory=dict)
    waivers: int = 0
    bullet: str = ""
    rejected: int = 0
    certificate: Optional[str] = None
    precondition: bool = False


@dataclass
class CampaignReport:
    lemma: str
    mode: str
    seed: int
    instances: int
    passed: int = 0
    failed: int = 0
    errors: int = 0
    waived: int = 0
    rejected_candidates: int = 0
    magnitude_waivers: int = 0
    bullets: Dict[str, int] = field(default_factory=dict)
    counterexamples: List[str] = field(default_factory=list)
    millis_total: float = 0.0
    trials: List[TrialResult] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.passed + self.failed + self.errors + self.waived == self.instances

    def csv_text(self, timing: bool = False) -> str:
        """CSV report; timings are left blank unless asked for, so reruns are byte-identical."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for t in self.trials:
            w.writerow([t.instance_id, t.graph6, t.lemma, t.mode, t.tag + (":" + t.bullet if t.bullet else ""),
                        t.verified, f"{t.millis:.1f}" if timing else ""])
        return buf.getvalue()

    def summary(self) -> Dict[str, Any]:
        return {"lemma": self.lemma, "mode": self.mode, "seed": self.seed, "instances": self.instances,
                "pass": self.passed, "fail": self.failed, "error": self.errors, "waived": self.waived,
                "rejected_candidates": self.rejected_candidates, "magnitude_waivers": self.magnitude_waivers,
                "bullets": dict(sorted(self.bullets.items())), "counterexamples": list(self.counterexamples)}


def _run_case(name: str, case: Case, mode: str, idx: int, rejected: int = 0) -> TrialResult:
    g6 = encode_graph6(case.g).decode()
    t0 = time.perf_counter()
    res = TrialResult(idx, g6, name, mode, "error", "", "", 0.0, _params_in(case.params), dict(case.inputs),
                      rejected=rejected)
    try:
        cert = invoke(name, case.g, case.params, case.inputs, mode)
    except GateError as exc:
        res.tag, res.detail = "waived", str(exc)
    except RelaxedShortfall as exc:
        res.tag, res.detail = "waived", str(exc)
    except LemmaFailure as exc:
        res.tag, res.detail = "fail", str(exc)
    except PreconditionError as exc:
        res.tag, res.detail, res.precondition = "error", f"{type(exc).__name__}: {exc}", True
    except (P5Found, TooLarge) as exc:
        res.tag, res.detail = "error", f"{type(exc).__name__}: {exc}"
    else:
        v: Verdict = verify_certificate(case.g, cert)
        res.verified = v.status
        res.bullet = cert.bullet or ""
        res.waivers = len(cert.params.get("waivers", []))
        res.certificate = cert.to_json()
        if v.ok:
            res.tag = "pass"
        elif v.status == "too_large":
            res.tag, res.detail = "error", v.reason
        else:
            res.tag, res.detail = "fail", v.reason
    res.millis = (time.perf_counter() - t0) * 1000
    return res


def _trial(args: Tuple[str, int, int, str]) -> TrialResult:
    """Draw candidates until one satisfies the hypotheses, then run and verify it."""
    name, seed, idx, mode = args
    entry = lemma_entry(name)
    rng = random.Random(f"{seed}:{name}:{idx}")
    rejected = 0
    for _ in range(MAX_CANDIDATES):
        case = entry.make(rng)
        if case is None:
            rejected += 1
            continue
        res = _run_case(name, case, mode, idx, rejected)
        if res.precondition:
            # the generator's candidate missed a hypothesis the operation checks itself
            rejected += 1
            continue
        return res
    return TrialResult(idx, "", name, mode, "error", "", "no candidate satisfied the hypotheses", 0.0,
                       rejected=rejected)


def run_campaign(name: str, trials: int, seed: int = 0, mode: Optional[str] = None, workers: int = 1,
                 results_dir: Optional[str] = None) -> CampaignReport:
    """Deterministic campaign: trial i depends only on (seed, lemma, i)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    entry = lemma_entry(name)
    mode = mode or entry.mode
    jobs = [(name, seed, i, mode) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [_trial(j) for j in jobs]
    rep = CampaignReport(name, mode, seed, trials)
    for r in results:  # pool.map keeps trial-index order
        rep.trials.append(r)
        rep.rejected_candidates += r.rejected
        rep.millis_total += r.millis
        if r.tag == "pass":
            rep.passed += 1
            rep.magnitude_waivers += r.waivers
            rep.bullets[r.bullet] = rep.bullets.get(r.bullet, 0) + 1
        elif r.tag == "fail":
            rep.failed += 1
            tag = f"{name}-{seed}-{r.instance_id}"
            rep.counterexamples.append(r.graph6)
            if results_dir and r.graph6:
                g = decode_graph6(r.graph6)
                save_counterexample(results_dir, tag, g, name, r.params, r.inputs, mode, r.detail)
        elif r.tag == "waived":
            rep.waived += 1
        else:
            rep.errors += 1
    return rep


# ---------------------------------------------------------------------------
# measure axioms for chi


@dataclass
class AxiomReport:
    checks: Dict[str, int] = field(default_factory=dict)
    failures: List[Tuple[str, str]] = field(default_factory=list)

    def record(self, name: str, ok: bool, g: Graph) -> None:
        self.checks[name] = self.checks.get(name, 0) + 1
        if not ok:
            self.failures.append((name, encode_graph6(g).decode()))

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_measure_axioms(pairs: int = 200, overlapping: int = 500, seed: int = 0, max_n: int = 7) -> AxiomReport:
    """Union/join equalities on constructed pairs, monotonicity and subadditivity on random subsets."""
    rng = random.Random(f"axioms:{seed}")
    rep = AxiomReport()
    for _ in range(pairs):
        g1 = random_composite(rng.randint(1, max_n), rng)
        g2 = random_composite(rng.randint(1, max_n), rng)
        c1, c2 = Oracle(g1).chi(g1.full), Oracle(g2).chi(g2.full)
        u, j = disjoint_union(g1, g2), join(g1, g2)
        rep.record("disjoint_union_max", Oracle(u).chi(u.full) == max(c1, c2), u)
        rep.record("join_sum", Oracle(j).chi(j.full) == c1 + c2, j)
    for _ in range(overlapping):
        g = _random_graph(rng, 2, 12)
        orc = Oracle(g)
        a, b = _subset(rng, g.full), _subset(rng, g.full)
        ca, cb, cu = orc.chi(a), orc.chi(b), orc.chi(a | b)
        rep.record("empty_and_singleton", orc.chi(0) == 0 and all(orc.chi(1 << v) == 1 for v in bits(g.full)), g)
        rep.record("monotone", max(ca, cb) <= cu and orc.chi(a & b) <= min(ca, cb), g)
        rep.record("subadditive", cu <= ca + cb, g)
        rep.record("omega_le_chi", size(orc.clique(a | b)) <= cu, g)
    return rep


# ---------------------------------------------------------------------------
# extremal scan


@dataclass
class ScanRow:
    graph6: str
    n: int
    omega: int
    chi: int
    exponent: Optional[float]


def chi_omega_exponent(chi_g: int, omega_g: int) -> Optional[float]:
    """log chi / log omega, with exactly 1.0 when chi == omega (None for omega < 2)."""
    if omega_g < 2:
        return None
    if chi_g == omega_g:
        return 1.0
    return math.log(chi_g) / math.log(omega_g)


def extremal_scan(trials: int, seed: int = 0, lo: int = 5, hi: int = 12,
                  extra: Optional[List[Graph]] = None) -> Tuple[List[ScanRow], Optional[ScanRow]]:
    """Exact chi and omega of P5-free instances with omega >= 2 (exploratory)."""
    rng = random.Random(f"scan:{seed}")
    graphs = list(extra or [])
    while len(graphs) < trials + len(extra or []):
        g = _random_graph(rng, lo, hi)
        if Oracle(g).omega(g.full) >= 2:
            graphs.append(g)
    rows = []
    for g in graphs:
        orc = Oracle(g)
        w, c = orc.omega(g.full), orc.chi(g.full)
        rows.append(ScanRow(encode_graph6(g).decode(), g.n, w, c, chi_omega_exponent(c, w)))
    best = max((r for r in rows if r.exponent is not None), key=lambda r: r.exponent, default=None)
    return rows, best


def scan_csv(rows: List[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("graph6", "n", "omega", "chi", "exponent"))
    for r in rows:
        w.writerow((r.graph6, r.n, r.omega, r.chi, "" if r.exponent is None else f"{r.exponent:.6f}"))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# mixed-vertex campaign


def mixed_campaign(trials: int, seed: int = 0) -> Tuple[int, List[str]]:
    """Connected anticomplete pairs in random P5-free graphs; returns (pairs checked, violating graphs)."""
    rng = random.Random(f"mixed:{seed}")
    checked, bad = 0, []
    while checked < trials:
        g = _random_graph(rng, 4, 12)
        t = _subset(rng, g.full, 0.6)
        comps = components(g, t)
        if len(comps) < 2:
            continue
        a, b = rng.sample(comps, 2)
        checked += 1
        if sl.mixed_violation(g, a, b) is not None:
            bad.append(encode_graph6(g).decode())
    return checked, bad


def is_p5_free_naive(g: Graph) -> bool:
    """Reference detector: a 5-subset induces P5 iff it is connected with degrees 1,1,2,2,2."""
    from itertools import combinations
    for five in combinations(range(g.n), 5):
        m = from_iter(five)
        degs = sorted(size(g.nbrs(v) & m) for v in five)
        if degs == [1, 1, 2, 2, 2] and len(components(g, m)) == 1:
            return False
    return True


__all__ = [
    "AxiomReport", "CampaignReport", "Case", "LEMMAS", "LemmaEntry", "ScanRow", "TrialResult",
    "certificate_inputs", "chi_omega_exponent", "extremal_scan", "invoke", "is_p5_free_naive", "lemma_entry",
    "mixed_campaign", "replay_certificate", "replay_counterexample", "run_campaign", "save_counterexample",
    "scan_csv", "verify_certificate", "verify_measure_axioms",
]
