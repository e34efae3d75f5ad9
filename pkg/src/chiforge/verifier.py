"""Independent certificate verification.

The checker never calls a construction routine.  For every (lemma, bullet)
it recomputes the inequalities the statement demands from the recorded
parameters and the chromatic numbers of the input sets, then requires each
of them to be present among the certificate's claims, re-evaluated against
the exact oracle.  Relation tags are re-checked by pair classification and
exact density tests.
"""
from __future__ import annotations

import copy
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from .certificate import RELATIONS, Certificate, CertificateError, Evaluator, pow_at_most, power_claim, relation_holds
from .chi_oracles import Oracle, TooLarge, oracle_for
from .exact import ceil_log2, exact_root, q
from .graph_core import Graph, bits, classify_pair, components, encode_graph6, find_induced_p5, size

KINDS = (
    "gyarfas", "complete_pair", "anticomplete_pair", "dense_subgraph", "dense_to_pair", "blockade",
    "complete_family", "pair_family",
)
BLOCK_TAGS = ("complete", "anticomplete", "pure", "dense", "anti_or_dense")

Req = Tuple[str, str, Fraction]


class Reject(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass
class Verdict:
    status: str  # 'accept', 'reject' or 'too_large'
    reason: str = ""
    lemma: str = ""
    bullet: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "accept"

    def __bool__(self) -> bool:
        return self.ok


class Ctx:
    """What a requirement function may inspect: graph, sets, params, oracle."""

    def __init__(self, g: Graph, cert: Certificate, masks: Dict[str, int], orc: Oracle):
        self.g = g
        self.cert = cert
        self.masks = masks
        self.orc = orc
        self.params = cert.params

    def expect(self, ok: bool, msg: str) -> None:
        if not ok:
            raise Reject(msg)

    def has(self, name: str) -> bool:
        return name in self.masks

    def set(self, name: str) -> int:
        if name not in self.masks:
            raise Reject(f"missing set {name!r}")
        return self.masks[name]

    def chi(self, name_or_mask) -> int:
        m = self.set(name_or_mask) if isinstance(name_or_mask, str) else name_or_mask
        return self.orc.chi(m)

    def param(self, name: str) -> Fraction:
        if name not in self.params:
            raise Reject(f"missing parameter {name!r}")
        try:
            return q(self.params[name])
        except (TypeError, ValueError, ZeroDivisionError):
            raise Reject(f"parameter {name!r} is not an exact rational") from None

    def iparam(self, name: str) -> int:
        v = self.param(name)
        self.expect(v.denominator == 1, f"parameter {name!r} must be an integer")
        return int(v)

    def in_range(self, name: str, lo, hi, lo_open: bool = True) -> Fraction:
        v = self.param(name)
        ok = (v > lo if lo_open else v >= lo) and v <= hi
        self.expect(ok, f"parameter {name} = {v} outside its range")
        return v

    def subset(self, inner: str, outer: str) -> None:
        self.expect(self.set(inner) & ~self.set(outer) == 0, f"set {inner} is not contained in {outer}")

    def blocks(self, prefix: str = "B") -> List[int]:
        out = []
        i = 1
        while f"{prefix}{i}" in self.masks:
            out.append(self.masks[f"{prefix}{i}"])
            i += 1
        extra = [k for k in self.masks if re.fullmatch(re.escape(prefix) + r"\d+", k)]
        self.expect(len(extra) == len(out), f"blocks named {prefix}<i> are not numbered 1..k")
        return out

    def root(self, x: Fraction, n: int, what: str) -> Fraction:
        r = exact_root(x, n)
        self.expect(r is not None, f"{what} is not a perfect {n}-th power")
        return r

    def dense_self(self, name: str, eps: Fraction) -> None:
        ok, bad = self.orc.density_check(self.set(name), eps, "self")
        self.expect(ok, f"{name} is not ({eps},chi)-dense: violator {bad}")

    def dense_to(self, b: int, a: int, eps: Fraction, label: str) -> None:
        ok, bad = self.orc.density_check(0, eps, "to", a=a, b=b)
        self.expect(ok, f"{label} is not ({eps},chi)-dense: violator {bad}")

    def pair(self, x: str, y: str, kind: str) -> None:
        mx, my = self.set(x), self.set(y)
        self.expect(mx != 0 and my != 0, f"pair ({x},{y}) has an empty side")
        self.expect(mx & my == 0, f"pair ({x},{y}) overlaps")
        got = classify_pair(self.g, mx, my).value
        if kind == "pure":
            self.expect(got != "mixed", f"pair ({x},{y}) is not pure")
        else:
            self.expect(got == kind, f"pair ({x},{y}) is {got}, not {kind}")


def _pair_reqs(thx: Fraction, thy: Fraction) -> List[Req]:
    return [("chi(X)", ">=", Fraction(thx)), ("chi(Y)", ">=", Fraction(thy))]


def _bullet(ctx: Ctx, allowed) -> str:
    b = ctx.params.get("bullet")
    ctx.expect(b in allowed, f"unknown bullet {b!r} for lemma {ctx.cert.lemma}")
    return b


def _kind(ctx: Ctx, *kinds: str) -> None:
    ctx.expect(ctx.cert.kind in kinds, f"kind {ctx.cert.kind} does not fit bullet {ctx.params.get('bullet')}")


# ---------------------------------------------------------------------------
# kind-level structural checks


def _check_kind(ctx: Ctx) -> None:
    kind = ctx.cert.kind
    if kind in ("complete_pair", "anticomplete_pair"):
        ctx.pair("X", "Y", kind.split("_")[0])
    elif kind == "dense_subgraph":
        ctx.expect(ctx.set("F") != 0, "dense subgraph is empty")
        ctx.dense_self("F", ctx.param("density"))
    elif kind == "dense_to_pair":
        x, y = ctx.set("X"), ctx.set("Y")
        # an empty X is only legal for a bullet whose requirement makes chi(X) >= 0 the whole claim
        ctx.expect((x != 0 or ctx.cert.bullet == "vacuous_pair") and y != 0 and x & y == 0,
                   "dense-to pair must be disjoint and nonempty")
        ctx.dense_to(x, y, ctx.param("density"), "X to Y")
    elif kind == "blockade":
        blocks = ctx.blocks("B")
        ctx.expect(len(blocks) >= 1, "blockade has no blocks")
        seen = 0
        for i, blk in enumerate(blocks, 1):
            ctx.expect(blk != 0, f"block B{i} is empty")
            ctx.expect(blk & seen == 0, f"block B{i} overlaps an earlier block")
            seen |= blk
        tag = ctx.params.get("tag")
        ctx.expect(tag in BLOCK_TAGS, f"unknown blockade tag {tag!r}")
        eps = ctx.param("density") if tag in ("dense", "anti_or_dense") else None
        for j in range(len(blocks)):
            for i in range(j):
                kind_ij = classify_pair(ctx.g, blocks[i], blocks[j]).value
                lab = f"(B{i + 1},B{j + 1})"
                if tag in ("complete", "anticomplete"):
                    ctx.expect(kind_ij == tag, f"blockade pair {lab} is {kind_ij}, not {tag}")
                elif tag == "pure":
                    ctx.expect(kind_ij != "mixed", f"blockade pair {lab} is not pure")
                elif tag == "dense" or kind_ij != "anticomplete":
                    ctx.dense_to(blocks[j], blocks[i], eps, f"B{j + 1} to B{i + 1}")
    elif kind == "complete_family":
        target = ctx.set("T")
        ctx.expect(target != 0, "family target is empty")
        for name in ctx.masks:
            if re.fullmatch(r"P\d+", name):
                m = ctx.masks[name]
                ctx.expect(m & target == 0, f"{name} meets the target")
                for v in bits(m):
                    ctx.expect(ctx.g.nbrs(v) & target == target, f"{name} is not complete to T (vertex {v})")
    elif kind == "pair_family":
        xs, ys = ctx.blocks("X"), ctx.blocks("Y")
        ctx.expect(len(xs) == len(ys), "pair family has unmatched sides")
        for n, (x, y) in enumerate(zip(xs, ys), 1):
            # an empty X is allowed: the chi(X) claim then forces a non-positive threshold
            ctx.expect(y != 0 and x & y == 0, f"pair {n} must be disjoint with Y nonempty")
            ctx.expect(x == 0 or classify_pair(ctx.g, x, y).value == "complete", f"X{n} is not complete to Y{n}")
    elif kind == "gyarfas":
        pass
    else:
        raise Reject(f"unknown certificate kind {kind!r}")


# ---------------------------------------------------------------------------
# requirement table: statement of each lemma, recomputed from params


def _req_gyarfas(ctx: Ctx) -> List[Req]:
    _bullet(ctx, ("neighbourhood",))
    _kind(ctx, "gyarfas")
    s = ctx.set("in_G")
    chi_s = ctx.chi(s)
    ctx.expect(chi_s >= 2, "chromatic number must be at least 2")
    v = ctx.iparam("v")
    ctx.expect(v >= 0 and s >> v & 1, "vertex v outside the graph")
    ctx.expect(ctx.set("N") == ctx.g.nbrs(v) & s, "N is not the neighbourhood of v")
    return [("chi(N)", ">=", Fraction(chi_s, 3))]


def _req_bip(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("pure", "dense_A", "dense_B"))
    eps = ctx.in_range("eps", 0, Fraction(1, 4))
    v = ctx.iparam("v")
    a, bb = ctx.set("in_A"), ctx.set("in_B")
    g = ctx.g
    ctx.expect(a != 0 and bb != 0, "A and B must be nonempty")
    ctx.expect(a & ~g.nbrs(v) == 0, "A must lie in N(v)")
    ctx.expect(bb & g.closed(v) == 0, "B must avoid N[v]")
    ctx.expect(ctx.set("in_G") == a | bb | (1 << v), "ground set must be A u B u {v}")
    ctx.dense_to(bb, a, eps, "input B to A")
    if b == "pure":
        _kind(ctx, "complete_pair", "anticomplete_pair")
        ctx.subset("X", "in_A")
        ctx.subset("Y", "in_B")
        return _pair_reqs(eps * ctx.chi(a), eps * ctx.chi(bb))
    _kind(ctx, "dense_subgraph")
    ctx.expect(ctx.param("density") == 4 * eps, "density parameter must be 4*eps")
    ctx.subset("F", "in_A" if b == "dense_A" else "in_B")
    return [("chi(F)", ">=", Fraction(ctx.chi(a if b == "dense_A" else bb), 2))]


def _req_pure_or_dense(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("pure", "dense"))
    eps = ctx.in_range("eps", 0, 1)
    ctx.expect(eps < 1, "eps must be below 1")
    delta = ctx.in_range("delta", 0, eps * eps / 128)
    thr = delta * ctx.chi("in_G")
    if b == "pure":
        _kind(ctx, "complete_pair", "anticomplete_pair")
        ctx.subset("X", "in_G")
        ctx.subset("Y", "in_G")
        return _pair_reqs(thr, thr)
    _kind(ctx, "dense_subgraph")
    ctx.expect(ctx.param("density") == eps, "density parameter must equal eps")
    ctx.subset("F", "in_G")
    return [("chi(F)", ">=", thr)]


def _req_rodl(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("anticomplete", "dense"))
    eps = ctx.in_range("eps", 0, 1)
    ctx.expect(eps < 1, "eps must be below 1")
    eta = eps * eps / 128
    delta = eta ** ceil_log2(1 / eps)
    ctx.expect(ctx.param("delta") == delta, "delta does not match eta^ceil(log2(1/eps))")
    thr = delta * ctx.chi("in_G")
    if b == "anticomplete":
        _kind(ctx, "anticomplete_pair")
        ctx.subset("X", "in_G")
        ctx.subset("Y", "in_G")
        return _pair_reqs(thr, thr)
    _kind(ctx, "dense_subgraph")
    ctx.expect(ctx.param("density") == eps, "density parameter must equal eps")
    ctx.subset("F", "in_G")
    return [("chi(F)", ">=", thr)]


def _req_decompose(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("anticomplete", "complete", "dense"))
    eps = ctx.in_range("eps", 0, Fraction(1, 4))
    p, qv = ctx.param("p"), ctx.param("q")
    chi_s = ctx.chi("in_G")
    ctx.expect(0 < p <= qv <= (1 - eps ** 2) * chi_s, "need 0 < p <= q <= (1 - eps^2) chi(G)")
    for name in ("X", "Y", "F"):
        if ctx.has(name):
            ctx.subset(name, "in_G")
    if b == "anticomplete":
        _kind(ctx, "anticomplete_pair")
        return _pair_reqs(qv - 2 * eps ** 4 * chi_s, (1 - eps ** 2) * chi_s)
    if b == "complete":
        _kind(ctx, "complete_pair")
        return _pair_reqs(eps ** 4 * chi_s, p)
    _kind(ctx, "dense_subgraph")
    ctx.expect(ctx.param("density") == eps, "density parameter must equal eps")
    return [("chi(F)", ">=", 2 * eps ** 3 * chi_s)]


def _phi(c: Fraction, r: int, s: int) -> Fraction:
    out = Fraction(1)
    for i in range(r + 1, s + 1):
        out *= 1 - c ** (2 ** (i + 1))
    return out


def _req_grow(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("anticomplete", "complete_balanced", "complete_unbalanced", "dense"))
    c = ctx.in_range("c", 0, Fraction(1, 512))
    s = ctx.iparam("s")
    ctx.expect(0 <= s <= 16, "s out of range")
    chi_s = ctx.chi("in_G")
    for name in ("X", "Y", "F"):
        if ctx.has(name):
            ctx.subset(name, "in_G")
    if b == "anticomplete":
        _kind(ctx, "anticomplete_pair")
        t = (1 - 2 * c ** (2 ** (s + 1))) * chi_s
        return _pair_reqs(t, t)
    if b == "complete_balanced":
        _kind(ctx, "complete_pair")
        t = _phi(c, 0, s) * c ** 4 * chi_s
        return _pair_reqs(t, t)
    r = ctx.iparam("r")
    ph = _phi(c, r, s) if 0 <= r <= s else None
    if b == "complete_unbalanced":
        _kind(ctx, "complete_pair")
        ctx.expect(1 <= r <= s, "r must satisfy 1 <= r <= s")
        return _pair_reqs(ph * c ** (2 ** (r + 2)) * chi_s, ph * (1 - 3 * c ** (2 ** r)) * chi_s)
    _kind(ctx, "dense_subgraph")
    ctx.expect(0 <= r <= s, "r must satisfy 0 <= r <= s")
    ctx.expect(ctx.param("density") == c ** (2 ** r), "density parameter must be c^(2^r)")
    return [("chi(F)", ">=", ph * 2 * c ** (3 * 2 ** r) * chi_s)]


def _req_anti_or_dense(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("complete_balanced", "complete_unbalanced", "dense"))
    a = ctx.iparam("a")
    ctx.expect(a >= 5, "a must be at least 5")
    c = ctx.in_range("c", 0, Fraction(1, 512))
    chi_s = ctx.chi("in_G")
    if ctx.params.get("mode") == "strict":
        ctx.expect(pow_at_most(1 / c, a, Fraction(chi_s)), "strict mode needs chi(G) >= c^-a")
    for name in ("X", "Y", "F"):
        if ctx.has(name):
            ctx.subset(name, "in_G")
    if b == "complete_balanced":
        _kind(ctx, "complete_pair")
        t = c ** 5 * chi_s
        return _pair_reqs(t, t)
    if b == "complete_unbalanced":
        _kind(ctx, "complete_pair")
        y = ctx.param("y")
        ctx.expect(0 < y < 1, "y must lie in (0, 1)")
        return [power_claim("X", 1 / y, 2 * a, Fraction(chi_s)), ("chi(Y)", ">=", (1 - y) * chi_s)]
    _kind(ctx, "dense_subgraph")
    eps = ctx.param("density")
    ctx.expect(0 < eps <= c, "density parameter must lie in (0, c]")
    ctx.expect(pow_at_most(1 / eps, a, Fraction(chi_s)), "density parameter below chi(G)^(-1/a)")
    return [power_claim("F", 1 / eps, 3, Fraction(chi_s))]


def _strict(ctx: Ctx) -> bool:
    return ctx.params.get("mode") == "strict"


def _vab(ctx: Ctx) -> Tuple[int, int]:
    """Inputs v, A inside N(v), B outside N[v], ground A u B u {v}."""
    g = ctx.g
    v = ctx.iparam("v")
    ctx.expect(0 <= v < g.n, "vertex v outside the graph")
    a, b = ctx.set("in_A"), ctx.set("in_B")
    ctx.expect(a != 0 and b != 0, "A and B must be nonempty")
    ctx.expect(a & ~g.nbrs(v) == 0, "A must lie in N(v)")
    ctx.expect(b & g.closed(v) == 0, "B must avoid N[v]")
    ctx.expect(ctx.set("in_G") == a | b | (1 << v), "ground set must be A u B u {v}")
    return a, b


def _nonnbr_bound(ctx: Ctx, a: int, b: int, r: Fraction) -> None:
    for u in bits(b):
        ctx.expect(ctx.chi(a & ~ctx.g.nbrs(u)) <= r, f"chi(A minus N({u})) exceeds r")


def _tagged_blocks(ctx: Ctx, tag: str, outer: int) -> List[int]:
    _kind(ctx, "blockade")
    ctx.expect(ctx.params.get("tag") == tag, f"blockade tag must be {tag}")
    blocks = ctx.blocks("B")
    for i, blk in enumerate(blocks, 1):
        ctx.expect(blk & ~outer == 0, f"block B{i} leaves its host set")
    return blocks


def _dense_pair_sets(ctx: Ctx, density: Fraction, x_in: int, y_in: int) -> None:
    _kind(ctx, "dense_to_pair")
    ctx.expect(ctx.param("density") == density, f"density parameter must be {density}")
    ctx.expect(ctx.set("X") & ~x_in == 0, "X leaves its host set")
    ctx.expect(ctx.set("Y") & ~y_in == 0, "Y leaves its host set")


def _count_reqs(k_lo_sq=None, k_lo=None, k_hi=None) -> List[Req]:
    out: List[Req] = []
    if k_lo_sq is not None:
        out.append(("pow(count(B), 2)", ">=", Fraction(k_lo_sq)))
    if k_lo is not None:
        out.append(("count(B)", ">=", Fraction(k_lo)))
    if k_hi is not None:
        out.append(("count(B)", "<=", Fraction(k_hi)))
    return out


def _xy_small(ctx: Ctx) -> Tuple[Fraction, Fraction]:
    x = ctx.in_range("x", 0, Fraction(1, 256))
    y = ctx.in_range("y", 0, Fraction(1, 256))
    ctx.expect(x <= y, "x must not exceed y")
    return x, y


def _req_avg(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("dense_pair", "vacuous_pair", "pure_blockade"))
    y = ctx.in_range("y", 0, Fraction(1, 2))
    r = ctx.param("r")
    ctx.expect(r > 0, "r must be positive")
    qn = ctx.iparam("q")
    ctx.expect(qn >= 1 and 2 * qn * y <= 1, "q must satisfy 1 <= q <= 1/(2y)")
    a, bb = _vab(ctx)
    chi_a, chi_b = ctx.chi(a), ctx.chi(bb)
    ctx.expect(chi_a >= qn * r, "chi(A) must be at least q*r")
    _nonnbr_bound(ctx, a, bb, r)
    if b in ("dense_pair", "vacuous_pair"):
        _dense_pair_sets(ctx, y, a, bb)
        if b == "vacuous_pair":
            ctx.expect(ctx.set("X") == 0 and chi_a - qn * r <= 0, "an empty X needs chi(A) - q r <= 0")
        return _pair_reqs(chi_a - qn * r, y * chi_b / 2)
    blocks = _tagged_blocks(ctx, "pure", bb)
    return _count_reqs(k_lo=qn) + [(f"chi(B{i})", ">=", y * y * chi_b / 2) for i in range(1, len(blocks) + 1)]


def _req_shrink(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("dense_pair", "pure_blockade"))
    x, y = _xy_small(ctx)
    a, bb = _vab(ctx)
    ctx.dense_to(a, bb, y, "input A to B")
    chi_a, chi_b = ctx.chi(a), ctx.chi(bb)
    if _strict(ctx):
        ctx.expect(chi_a * x >= 2, "strict mode needs chi(A) >= 2/x")
    if b == "dense_pair":
        _dense_pair_sets(ctx, x, a, bb)
        return _pair_reqs(chi_a - 2 / x, Fraction(chi_b, 2))
    k = len(_tagged_blocks(ctx, "pure", bb))
    ctx.expect(k >= 1, "blockade has no blocks")
    return _count_reqs(k_lo_sq=1 / y, k_hi=1 / (x * x)) + [
        (f"chi(B{i})", ">=", Fraction(chi_b, k * k)) for i in range(1, k + 1)]


def _isqrt_ceil(t: Fraction) -> int:
    """Least integer m >= 0 with m^2 >= t."""
    m = 0
    while m * m < t:
        m += 1
    return m


def _req_combine(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("dense_pair", "pure_blockade"))
    x, y = _xy_small(ctx)
    r = ctx.param("r")
    ctx.expect(r > 0, "r must be positive")
    a, bb = _vab(ctx)
    _nonnbr_bound(ctx, a, bb, r)
    chi_a, chi_b = ctx.chi(a), ctx.chi(bb)
    if _strict(ctx):
        # chi(A) >= 2 y^(-1/2) r + 2/x, squared to stay rational
        t = chi_a - 2 / x
        ctx.expect(t >= 0 and t * t * y >= 4 * r * r, "strict mode needs chi(A) >= 2 y^(-1/2) r + 2/x")
    if b == "dense_pair":
        _dense_pair_sets(ctx, x, a, bb)
        # q = ceil(y^(-1/2)) <= 2 y^(-1/2), so this is at least the stated bound
        return _pair_reqs(chi_a - _isqrt_ceil(1 / y) * r - 2 / x, y * y * chi_b / 4)
    k = len(_tagged_blocks(ctx, "pure", bb))
    ctx.expect(k >= 1, "blockade has no blocks")
    return _count_reqs(k_lo_sq=1 / y, k_hi=1 / (x * x)) + [
        power_claim(f"B{i}", Fraction(k), 7, Fraction(chi_b)) for i in range(1, k + 1)]


def _req_incre1(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("denser", "dense_pair", "pure_blockade"))
    x, y = _xy_small(ctx)
    ry = ctx.root(y, 2, "y")
    s = ctx.set("in_G")
    ctx.expect(s != 0, "graph must be nonempty")
    ctx.dense_self("in_G", y)
    chi_s = ctx.chi(s)
    if _strict(ctx):
        ctx.expect(x * x * chi_s >= 1, "strict mode needs chi(G) >= x^-2")
    if b == "denser":
        _kind(ctx, "dense_subgraph")
        ctx.expect(ctx.param("density") == y * y, "density parameter must be y^2")
        ctx.subset("F", "in_G")
        return [("chi(F)", ">=", Fraction(chi_s))]
    if b == "dense_pair":
        _dense_pair_sets(ctx, x, s, s)
        return _pair_reqs((1 - 3 * ry) * chi_s, y ** 4 * chi_s / 4)
    k = len(_tagged_blocks(ctx, "pure", s))
    ctx.expect(k >= 1, "blockade has no blocks")
    return _count_reqs(k_lo_sq=1 / y, k_hi=1 / (x * x)) + [
        power_claim(f"B{i}", Fraction(k), 11, Fraction(chi_s)) for i in range(1, k + 1)]


def _req_round1(ctx: Ctx) -> List[Req]:
    b = _bullet(ctx, ("pure_pair", "pure_blockade", "dense_blockade"))
    ctx.expect(ctx.iparam("a") == 200, "exponent a must be 200")
    if _strict(ctx):
        x = ctx.in_range("x", 0, Fraction(1, 2 ** 200))
    else:
        x = ctx.in_range("x", 0, Fraction(1, 2))
        ctx.expect(x < Fraction(1, 2), "x must lie below 1/2")
    s = ctx.set("in_G")
    ctx.expect(size(s) >= 2, "graph needs two vertices")
    chi_s = ctx.chi(s)
    if _strict(ctx):
        ctx.expect(pow_at_most(1 / x, 200, Fraction(chi_s)), "strict mode needs chi(G) >= x^-200")
    if b == "dense_blockade":
        blocks = _tagged_blocks(ctx, "dense", s)
        ctx.expect(ctx.param("density") == x, "density parameter must equal x")
    else:
        blocks = _tagged_blocks(ctx, "pure", s)
    k = len(blocks)
    ctx.expect(k >= 1, "blockade has no blocks")
    return _count_reqs(k_lo=2, k_hi=1 / x) + [
        power_claim(f"B{i}", Fraction(k), 200, Fraction(chi_s)) for i in range(1, k + 1)]


# constant chain, recomputed here rather than imported
_A1 = 200
_B = 6 * _A1 ** 3
_A2 = 16 * _B * _B + 24 * _B
_D = 32 * _A2 + 96


def _index_list(ctx: Ctx, name: str, hi: int) -> List[int]:
    idx = ctx.params.get(name)
    ctx.expect(isinstance(idx, list) and all(isinstance(i, int) for i in idx), f"parameter {name} must list indices")
    ctx.expect(all(1 <= i <= hi for i in idx) and idx == sorted(set(idx)), f"parameter {name} out of range")
    return idx


def _numbered_inputs(ctx: Ctx, prefix: str) -> List[int]:
    out = ctx.blocks(prefix)
    ctx.expect(len(out) >= 1, f"missing input sets {prefix}<i>")
    return out


def _union(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def _extract_hypotheses(ctx: Ctx, a_sets: List[int], bs: List[int], rs: List[Fraction]) -> None:
    g = ctx.g
    ctx.expect(ctx.set("in_G") == _union(a_sets + bs), "ground set must be the union of the inputs")
    ctx.expect(sum(size(m) for m in a_sets + bs) == size(ctx.set("in_G")), "input sets overlap")
    ctx.expect(all(m != 0 for m in a_sets + bs), "input sets must be nonempty")
    ctx.expect(all(r > 0 for r in rs), "r must be positive")
    for j in range(len(bs)):
        ctx.expect(size(bs[j]) == 1 or len(components(g, bs[j], "anticonnected")) == 1, f"in_B{j + 1} is not anticonnected")
        for i in range(j):
            ctx.expect(classify_pair(g, bs[i], bs[j]).value == "anticomplete", "B sets are not pairwise anticomplete")
    ub = _union(bs)
    for a, r in zip(a_sets, rs):
        for v in bits(a):
            n_mixed = sum(1 for m in bs if g.nbrs(v) & m and g.nbrs(v) & m != m)
            ctx.expect(n_mixed <= 1, f"vertex {v} is mixed on two B sets")
        for u in bits(ub):
            ctx.expect(ctx.chi(a & ~g.nbrs(u)) <= r, f"chi(A minus N({u})) exceeds r")


def _b_and_a(ctx: Ctx) -> Tuple[int, int]:
    b, a = ctx.iparam("b"), ctx.iparam("a")
    if _strict(ctx):
        ctx.expect(b == _B and a == _A1, "strict mode must use the ledger exponents")
    else:
        ctx.expect(a >= 1 and b == 6 * a ** 3, "b must equal 6 a^3")
    return b, a


def _req_convert(ctx: Ctx) -> List[Req]:
    _bullet(ctx, ("blockade",))
    eps = ctx.in_range("eps", 0, Fraction(1, 2))
    a = ctx.iparam("a")
    ctx.expect(a >= 1, "a must be at least 1")
    s = ctx.set("in_G")
    chi_s = ctx.chi(s)
    if _strict(ctx):
        ctx.expect(pow_at_most(1 / eps, 3 * a * a, Fraction(chi_s)), "strict mode needs chi(G) >= eps^(-3a^2)")
    tag = ctx.params.get("tag")
    ctx.expect(tag in ("anticomplete", "dense", "anti_or_dense"), "tag must be anticomplete, dense or anti_or_dense")
    if tag != "anticomplete":
        ctx.expect(ctx.param("density") == eps ** a, "density parameter must be eps^a")
    k = len(_tagged_blocks(ctx, tag, s))
    x = eps ** (3 * a)
    return [("count(B)", ">=", 1 / eps)] + [power_claim(f"B{i}", 1 / x, 2 * a, Fraction(chi_s)) for i in range(1, k + 1)]


def _req_midway(ctx: Ctx) -> List[Req]:
    b_ = _bullet(ctx, ("anticomplete", "dense"))
    eps = ctx.in_range("eps", 0, Fraction(1, 2))
    b, _ = _b_and_a(ctx)
    s = ctx.set("in_G")
    chi_s = ctx.chi(s)
    if _strict(ctx):
        ctx.expect(pow_at_most(1 / eps, b, Fraction(chi_s)), "strict mode needs chi(G) >= eps^-b")
    k = len(_tagged_blocks(ctx, b_, s))
    if b_ == "dense":
        ctx.expect(ctx.param("density") == eps, "density parameter must equal eps")
    return [("count(B)", ">=", 1 / eps)] + [power_claim(f"B{i}", 1 / eps, b, Fraction(chi_s)) for i in range(1, k + 1)]


def _req_extract(ctx: Ctx) -> List[Req]:
    b_ = _bullet(ctx, ("complete_pairs", "complete_blockade"))
    r = ctx.param("r")
    a = ctx.set("in_A")
    bs = _numbered_inputs(ctx, "in_B")
    k = len(bs)
    ctx.expect(ctx.iparam("k") == k, "parameter k must count the B sets")
    _extract_hypotheses(ctx, [a], bs, [r])
    chi_a = ctx.chi(a)
    if b_ == "complete_pairs":
        _kind(ctx, "pair_family")
        idx = _index_list(ctx, "index", k)
        xs, ys = ctx.blocks("X"), ctx.blocks("Y")
        ctx.expect(len(xs) == len(idx), "one pair per listed index")
        for n, i in enumerate(idx):
            ctx.expect(xs[n] & ~a == 0, f"X{n + 1} leaves A")
            ctx.expect(ys[n] == bs[i - 1], f"Y{n + 1} is not B{i}")
        thr = (1 - Fraction(1, k)) * chi_a - k * r
        return [(f"pow(sub({k}, count(X)), 2)", "<=", Fraction(k))] + [(f"chi(X{n})", ">=", thr)
                                                                      for n in range(1, len(xs) + 1)]
    nb = len(_tagged_blocks(ctx, "complete", a))
    return [("pow(count(B), 2)", ">=", Fraction(k))] + [(f"chi(B{i})", ">=", Fraction(chi_a, k)) for i in range(1, nb + 1)]


def _req_averaged(ctx: Ctx) -> List[Req]:
    b_ = _bullet(ctx, ("complete_family", "complete_blockade"))
    a_sets = _numbered_inputs(ctx, "in_A")
    bs = _numbered_inputs(ctx, "in_B")
    ell, k = len(a_sets), len(bs)
    ctx.expect(ctx.iparam("k") == k and ctx.iparam("ell") == ell, "parameters k, ell must count the inputs")
    raw = ctx.params.get("r")
    ctx.expect(isinstance(raw, list) and len(raw) == ell, "need one r per A set")
    try:
        rs = [q(r) for r in raw]
    except (TypeError, ValueError, ZeroDivisionError):
        raise Reject("r values must be exact rationals") from None
    _extract_hypotheses(ctx, a_sets, bs, rs)
    chis = [ctx.chi(m) for m in a_sets]
    if b_ == "complete_family":
        _kind(ctx, "complete_family")
        i = ctx.iparam("i")
        ctx.expect(1 <= i <= k and ctx.set("T") == bs[i - 1], "T must be the chosen B set")
        idx = _index_list(ctx, "index", ell)
        ps = ctx.blocks("P")
        ctx.expect(len(ps) == len(idx), "one P set per listed index")
        out: List[Req] = [(f"mul(pow(sub({ell}, count(P)), 2), {k})", "<=", Fraction(ell * ell))]
        for n, j in enumerate(idx):
            ctx.expect(ps[n] & ~a_sets[j - 1] == 0, f"P{n + 1} leaves A{j}")
            out.append((f"chi(P{n + 1})", ">=", (1 - Fraction(1, k)) * chis[j - 1] - k * rs[j - 1]))
        return out
    j = ctx.iparam("j")
    ctx.expect(1 <= j <= ell, "j out of range")
    nb = len(_tagged_blocks(ctx, "complete", a_sets[j - 1]))
    return [("pow(count(B), 2)", ">=", Fraction(k))] + [(f"chi(B{i})", ">=", Fraction(chis[j - 1], k))
                                                         for i in range(1, nb + 1)]


def _req_anticonn(ctx: Ctx) -> List[Req]:
    _bullet(ctx, ("complete_blockade",))
    y = ctx.in_range("y", 0, Fraction(1, 8))
    s = ctx.set("in_G")
    chi_s = ctx.chi(s)
    for c in components(ctx.g, s, "anticonnected"):
        ctx.expect(ctx.chi(c) < y * chi_s, "an anticonnected set reaches y chi(G)")
    k = len(_tagged_blocks(ctx, "complete", s))
    return [("pow(count(B), 2)", ">=", 1 / y)] + [(f"chi(B{i})", ">=", y * chi_s) for i in range(1, k + 1)]


def _req_incre2(ctx: Ctx) -> List[Req]:
    b_ = _bullet(ctx, ("dense_blockade", "transversal", "complete_blockade"))
    y = ctx.in_range("y", 0, Fraction(1, 256))
    b = ctx.iparam("b")
    if _strict(ctx):
        ctx.expect(b == _B, "strict mode must use the ledger b")
    else:
        ctx.expect(b >= 6 and b % 6 == 0 and any(6 * t ** 3 == b for t in range(1, 2 + int(round((b // 6) ** (1 / 3))))),
                   "b must equal 6 a^3")
    blocks = _numbered_inputs(ctx, "in_A")
    ell = len(blocks)
    ctx.expect(ell >= 2 and ell ** 4 * y >= 1, "need at least max(2, y^(-1/4)) blocks")
    ctx.expect(ctx.set("in_G") == _union(blocks), "ground set must be the union of the blocks")
    ctx.expect(sum(size(m) for m in blocks) == size(ctx.set("in_G")) and all(blocks), "blocks must be disjoint and nonempty")
    for j in range(ell):
        for i in range(j):
            ctx.dense_to(blocks[j], blocks[i], y, f"input block {j + 1} to {i + 1}")
    chis = [ctx.chi(m) for m in blocks]
    if _strict(ctx):
        ctx.expect(pow_at_most(1 / y, b * b, Fraction(chis[-1])), "strict mode needs chi(A_l) >= y^(-b^2)")
    if b_ == "dense_blockade":
        ctx.expect(ctx.iparam("j") == ell, "dense blockade must lie in the last block")
        ctx.expect(ctx.param("density") == y ** b, "density parameter must be y^b")
        k = len(_tagged_blocks(ctx, "dense", blocks[-1]))
        return [("count(B)", ">=", (1 / y) ** b)] + [power_claim(f"B{i}", 1 / y, b * b, Fraction(chis[-1]))
                                                      for i in range(1, k + 1)]
    if b_ == "transversal":
        _kind(ctx, "complete_family")
        ctx.subset("T", "in_A%d" % ell)
        idx = _index_list(ctx, "index", ell - 1)
        ps = ctx.blocks("P")
        ctx.expect(len(ps) == len(idx), "one P set per listed index")
        out: List[Req] = [power_claim("T", 1 / y, b * b + 1, Fraction(chis[-1])),
                          (f"pow(sub({ell}, count(P)), 4)", "<=", 16 * y * ell ** 4)]
        for n, j in enumerate(idx):
            ctx.expect(ps[n] & ~blocks[j - 1] == 0, f"P{n + 1} leaves A{j}")
            c = chis[j - 1]
            out.append((f"pow(sub({c}, chi(P{n + 1})), 2)", "<=", 9 * y * c * c))
        return out
    j = ctx.iparam("j")
    ctx.expect(1 <= j <= ell, "j out of range")
    k = len(_tagged_blocks(ctx, "complete", blocks[j - 1]))
    return [("pow(count(B), 4)", ">=", 1 / y)] + [power_claim(f"B{i}", 1 / y, b * b + 1, Fraction(chis[j - 1]))
                                                  for i in range(1, k + 1)]


def _req_round2(ctx: Ctx) -> List[Req]:
    _bullet(ctx, ("complete_blockade",))
    eps = ctx.in_range("eps", 0, Fraction(1, 2 ** 32) if _strict(ctx) else Fraction(1, 16))
    a = ctx.iparam("a")
    ctx.expect(a == _A2, "exponent a must be 16 b^2 + 24 b")
    s = ctx.set("in_G")
    ctx.dense_self("in_G", eps)
    chi_s = ctx.chi(s)
    if _strict(ctx):
        ctx.expect(pow_at_most(1 / eps, a, Fraction(chi_s)), "strict mode needs chi(G) >= eps^-a")
    k = len(_tagged_blocks(ctx, "complete", s))
    return [("pow(count(B), 16)", ">=", 1 / eps)] + [power_claim(f"B{i}", Fraction(k), a, Fraction(chi_s))
                                                     for i in range(1, k + 1)]


def _req_main(ctx: Ctx) -> List[Req]:
    b_ = _bullet(ctx, ("complete_pair", "complete_blockade"))
    d = ctx.iparam("d")
    ctx.expect(d == _D, "exponent d must be 32 a2 + 96")
    s = ctx.set("in_G")
    chi_s = ctx.chi(s)
    ctx.expect(chi_s >= 2, "chromatic number must be at least 2")
    if _strict(ctx):
        ctx.expect(pow_at_most(Fraction(2), d, Fraction(chi_s)), "strict mode needs chi(G) >= 2^d")
    if b_ == "complete_pair":
        _kind(ctx, "complete_pair")
        y = ctx.param("y")
        ctx.expect(0 < y < 1, "y must lie in (0, 1)")
        ctx.subset("X", "in_G")
        ctx.subset("Y", "in_G")
        return [power_claim("X", 1 / y, d, Fraction(chi_s)), ("chi(Y)", ">=", (1 - y) * chi_s)]
    k = len(_tagged_blocks(ctx, "complete", s))
    return [("count(B)", ">=", Fraction(2))] + [power_claim(f"B{i}", Fraction(k), d, Fraction(chi_s))
                                                for i in range(1, k + 1)]


REQUIREMENTS: Dict[str, Callable[[Ctx], List[Req]]] = {
    "gyarfas": _req_gyarfas,
    "bip_trichotomy": _req_bip,
    "pure_or_dense": _req_pure_or_dense,
    "rodl_chi": _req_rodl,
    "decompose_anti": _req_decompose,
    "grow_anticomplete": _req_grow,
    "anti_or_dense": _req_anti_or_dense,
    "avg_p5": _req_avg,
    "dense_shrink": _req_shrink,
    "dense_combine": _req_combine,
    "incre1_step": _req_incre1,
    "round1": _req_round1,
    "convert_blockade": _req_convert,
    "midway_blockade": _req_midway,
    "anticomplete_extract": _req_extract,
    "averaged_extract": _req_averaged,
    "anticonn_or_complete": _req_anticonn,
    "incre2_step": _req_incre2,
    "round2": _req_round2,
    "main_trichotomy": _req_main,
}


def register_requirement(lemma: str):
    def deco(fn):
        REQUIREMENTS[lemma] = fn
        return fn
    return deco


# ---------------------------------------------------------------------------
# the verifier


def _schema(g: Graph, cert: Certificate) -> Dict[str, int]:
    if cert.kind not in KINDS:
        raise Reject(f"unknown certificate kind {cert.kind!r}")
    if cert.lemma not in REQUIREMENTS:
        raise Reject(f"unknown lemma {cert.lemma!r}")
    masks = {}
    for name, members in cert.sets.items():
        if len(set(members)) != len(members):
            raise Reject(f"set {name} lists a vertex twice")
        m = 0
        for v in members:
            if not 0 <= v < g.n:
                raise Reject(f"set {name} has out-of-range vertex {v}")
            m |= 1 << v
        masks[name] = m
    if "in_G" not in masks:
        raise Reject("certificate lacks its ground set in_G")
    for c in cert.claims:
        if c.rel not in RELATIONS:
            raise Reject(f"unknown relation {c.rel!r}")
    return masks


def _binding(g: Graph, cert: Certificate) -> None:
    if not cert.trace or not isinstance(cert.trace[0], dict):
        raise Reject("certificate trace lacks its input record")
    g6 = cert.trace[0].get("graph6")
    if g6 != encode_graph6(g).decode():
        raise Reject("certificate is bound to a different graph")


def verify_certificate(g: Graph, cert, oracle: Optional[Oracle] = None) -> Verdict:
    """Accept iff every claim, relation tag and lemma requirement re-checks exactly."""
    lemma = bullet = ""
    try:
        if not isinstance(cert, Certificate):
            cert = Certificate.from_json(cert)
        lemma, bullet = cert.lemma, str(cert.params.get("bullet", ""))
        masks = _schema(g, cert)
        _binding(g, cert)
        orc = oracle or oracle_for(g)
        ev = Evaluator(g, masks, orc)
        for c in cert.claims:
            lhs = ev(c.meaning)
            if lhs != c.lhs:
                raise Reject(f"claim lhs does not match: {c.meaning} is {lhs}, certificate says {c.lhs}")
            if not relation_holds(lhs, c.rel, c.rhs):
                raise Reject(f"chi inequality fails: {c.meaning} = {lhs} {c.rel} {c.rhs} is false")
        ctx = Ctx(g, cert, masks, orc)
        required = REQUIREMENTS[cert.lemma](ctx)
        present = {(c.meaning, c.rel, c.rhs) for c in cert.claims}
        for meaning, rel, rhs in required:
            if (meaning, rel, Fraction(rhs)) not in present:
                raise Reject(f"claim does not match lemma statement: need {meaning} {rel} {rhs}")
        _check_kind(ctx)
        w = find_induced_p5(g, masks["in_G"])
        if w is not None:
            raise Reject(f"ground graph contains an induced P5 {w}")
    except TooLarge as exc:
        return Verdict("too_large", str(exc), lemma, bullet)
    except Reject as exc:
        return Verdict("reject", exc.reason, lemma, bullet)
    except CertificateError as exc:
        return Verdict("reject", f"malformed certificate: {exc}", lemma, bullet)
    return Verdict("accept", "", lemma, bullet)


# ---------------------------------------------------------------------------
# planted faults


def _first_claim(obj):
    return obj["claims"][0] if obj["claims"] else None


def _output_sets(obj) -> List[str]:
    """Output set names, nonempty ones first so every mutation changes something."""
    names = [k for k in sorted(obj["sets"]) if not k.startswith("in_")]
    return sorted(names, key=lambda k: not obj["sets"][k])


def _m_lhs_bumped(obj, g):
    c = _first_claim(obj)
    c["lhs"] = _fmt(q(c["lhs"]) + 1)


def _m_rhs_false(obj, g):
    c = _first_claim(obj)
    c["rhs"] = _fmt(q(c["lhs"]) + 1) if c["rel"] in (">=", ">") else _fmt(q(c["lhs"]) - 1)


def _m_rhs_lowered(obj, g):
    c = _first_claim(obj)
    c["rhs"] = _fmt(q(c["rhs"]) - Fraction(1, 7)) if c["rel"] in (">=", ">") else _fmt(q(c["rhs"]) + Fraction(1, 7))


def _m_claim_removed(obj, g):
    obj["claims"].pop(0)


def _m_out_of_range(obj, g):
    name = _output_sets(obj)[0]
    obj["sets"][name] = obj["sets"][name] + [g.n]


def _m_duplicate(obj, g):
    name = _output_sets(obj)[0]
    obj["sets"][name] = obj["sets"][name] + obj["sets"][name][:1]


def _m_set_removed(obj, g):
    del obj["sets"][_output_sets(obj)[0]]


def _m_unknown_kind(obj, g):
    obj["kind"] = obj["kind"] + "_x"


def _m_unknown_lemma(obj, g):
    obj["lemma"] = obj["lemma"] + "_x"


def _m_rel_flipped(obj, g):
    c = _first_claim(obj)
    c["rel"] = {">=": "<", ">": "<=", "<=": ">", "<": ">="}[c["rel"]]


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


FAULTS: Dict[str, Callable[[Dict[str, Any], Graph], None]] = {
    "lhs_bumped": _m_lhs_bumped,
    "rhs_made_false": _m_rhs_false,
    "rhs_lowered": _m_rhs_lowered,
    "claim_removed": _m_claim_removed,
    "vertex_out_of_range": _m_out_of_range,
    "vertex_duplicated": _m_duplicate,
    "output_set_removed": _m_set_removed,
    "kind_renamed": _m_unknown_kind,
    "lemma_renamed": _m_unknown_lemma,
    "relation_flipped": _m_rel_flipped,
}


def plant_fault(cert: Certificate, fault: str, g: Graph) -> Dict[str, Any]:
    """A JSON copy of the certificate with one planted fault."""
    obj = copy.deepcopy(cert.as_json())
    FAULTS[fault](obj, g)
    return obj


def plant_dense_violator(g: Graph, cert: Certificate) -> Tuple[Graph, Dict[str, Any], Optional[int]]:
    """Add a vertex with empty neighbourhood into F of a dense certificate.

    Returns the enlarged graph, the doctored certificate and the planted
    vertex (None when the certificate has no dense subgraph).
    """
    if "F" not in cert.sets:
        return g, cert.as_json(), None
    n = g.n
    edges = list(g.edges())
    g2 = Graph.from_edges(n + 1, edges)
    obj = copy.deepcopy(cert.as_json())
    obj["sets"]["F"] = obj["sets"]["F"] + [n]
    obj["sets"]["in_G"] = obj["sets"]["in_G"] + [n]
    obj["trace"][0]["graph6"] = encode_graph6(g2).decode()
    ev = Evaluator(g2, {k: sum(1 << v for v in vs) for k, vs in obj["sets"].items()})
    for c in obj["claims"]:
        c["lhs"] = _fmt(ev(c["meaning"]))
    return g2, obj, n


__all__ = [
    "Ctx", "FAULTS", "KINDS", "REQUIREMENTS", "Reject", "Verdict", "plant_dense_violator", "plant_fault",
    "register_requirement", "verify_certificate",
]
