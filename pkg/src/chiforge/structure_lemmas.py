"""Pure pairs, dense subgraphs, cutset decompositions and anticomplete growth.

Each public operation returns a :class:`Certificate`.  The ``_name``
counterparts take a shared :class:`Run` and a ground mask and return an
:class:`Outcome`, so that procedures can call each other on induced
subgraphs without copying graphs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from .certificate import Certificate, pow_at_least, pow_at_most, power_claim
from .chi_oracles import P5Found
from .exact import ceil_log2, q
from .graph_core import Graph, PairKind, bits, classify_pair, components, find_induced_p5, least, size, to_list
from .procedure import (LemmaFailure, Outcome, Run, SparsityFailure,
                        check_p5_free, connected_subsets, in_range, maximal_component, require,
                        saturate_pair, split_on, union_nbrs)

HALF = Fraction(1, 2)
C_MAX = Fraction(1, 2 ** 9)
SPARSE_SEARCH_LIMIT = 6000


def _ground(g: Graph, ground: Optional[int]) -> int:
    s = g.full if ground is None else ground
    g.check_set(s)
    return s


def _pair_outcome(g: Graph, x: int, y: int, bullet: str = "pure") -> Outcome:
    kind = classify_pair(g, x, y)
    if kind is PairKind.MIXED:
        raise AssertionError("pair outcome is not pure")
    return Outcome(bullet, f"{kind.value}_pair", {"X": x, "Y": y})


def _dense_outcome(f: int, eps: Fraction, bullet: str = "dense") -> Outcome:
    return Outcome(bullet, "dense_subgraph", {"F": f}, {"density": eps})


def _pair_claims(thx: Fraction, thy: Fraction) -> List[Tuple[str, str, Fraction]]:
    return [("chi(X)", ">=", thx), ("chi(Y)", ">=", thy)]


# ---------------------------------------------------------------------------
# Gyarfas vertex


@dataclass(frozen=True)
class GyarfasWitness:
    v: int
    chiN: int
    chiG: int
    certificate: Optional[Certificate] = None


def _gyarfas_vertex(run: Run, s: int) -> Optional[int]:
    """First vertex v of S (index order) with 3*chi(N(v) & S) >= chi(S)."""
    target = run.chi(s)
    for v in bits(s):
        if 3 * run.chi(run.g.nbrs(v) & s) >= target:
            return v
    return None


def gyarfas_vertex(g: Graph, ground: Optional[int] = None) -> GyarfasWitness:
    """Vertex whose neighbourhood carries a third of the chromatic number."""
    s = _ground(g, ground)
    run = Run(g, "gyarfas", {}, "strict", "A")
    check_p5_free(g, s)
    chi_s = run.chi(s)
    require(chi_s >= 2, "chromatic number must be at least 2", chi_s)
    v = _gyarfas_vertex(run, s)
    if v is None:
        raise LemmaFailure("gyarfas", "no vertex has a neighbourhood of chromatic number >= chi/3",
                           run.builder.trace[0]["graph6"])
    nb = g.nbrs(v) & s
    run.note("scan", v=v, chiN=run.chi(nb), chiG=chi_s)
    cert = run.certificate(Outcome("neighbourhood", "gyarfas", {"N": nb}, {"v": v}), {"in_G": s},
                           [("chi(N)", ">=", Fraction(chi_s, 3))])
    return GyarfasWitness(v, run.chi(nb), chi_s, cert)


# ---------------------------------------------------------------------------
# bipartite trichotomy


def _check_bip_inputs(run: Run, v: int, a: int, b: int, eps: Fraction) -> None:
    g = run.g
    in_range(eps, Fraction(0), Fraction(1, 4), "eps")
    require(a != 0 and b != 0, "A and B must be nonempty")
    outside = a & ~g.nbrs(v)
    require(not outside, "A must lie in N(v)", to_list(outside))
    inside = b & g.closed(v)
    require(not inside, "B must avoid N[v]", to_list(inside))
    ok, bad = run.orc.density_check(0, eps, "to", a=a, b=b)
    require(ok, "B must be (eps, chi)-dense to A", bad)


def _bip(run: Run, v: int, a: int, b: int, eps: Fraction) -> Outcome:
    """Pure pair, or a 4*eps-dense half of A or of B."""
    g, orc = run.g, run.orc
    chi_a, chi_b = run.chi(a), run.chi(b)
    tha, thb = eps * chi_a, eps * chi_b

    def good_pair(x: int, y: int) -> bool:
        if not x or not y:
            return False
        if classify_pair(g, x, y) is PairKind.MIXED:
            return False
        return run.chi(x) >= tha and run.chi(y) >= thb

    c_set = 0
    for u in bits(a):
        if run.chi(a & ~g.closed(u)) <= 3 * eps * chi_a:
            c_set |= 1 << u
    d_set = 0
    for z in bits(b):
        if run.chi(b & ~g.closed(z)) <= 2 * eps * chi_b:
            d_set |= 1 << z
    run.note("bip", route="C and D sets", C=to_list(c_set), D=to_list(d_set))
    if good_pair(a, b):
        run.note("bip", route="whole pair is pure")
        return _pair_outcome(g, a, b)
    for u in bits(a & ~c_set):
        for z in bits(b & ~d_set & ~g.nbrs(u)):
            x = a & ~g.closed(u) & g.nbrs(z)
            rest = b & ~g.closed(z) & ~g.nbrs(u)
            if rest:
                e = maximal_component(run, rest)
                x1, x2, mixed = split_on(g, x, e)
                if mixed:
                    w = find_induced_p5(g, e | mixed | (1 << u) | (1 << v))
                    raise P5Found(w) if w else AssertionError("mixed vertex without a P5")
                for xi in (x1, x2):
                    if good_pair(xi, e):
                        run.note("bip", route="X part against component E", u=u, z=z)
                        return _pair_outcome(g, xi, e)
            y = b & ~g.closed(z) & g.nbrs(u)
            if x and y:
                kind = classify_pair(g, x, y)
                if kind is PairKind.COMPLETE and good_pair(x, y):
                    run.note("bip", route="X complete to Y", u=u, z=z)
                    return _pair_outcome(g, x, y)
                if kind is not PairKind.COMPLETE:
                    for u2 in bits(x):
                        miss = y & ~g.nbrs(u2)
                        if miss:
                            five = (1 << z) | (1 << u2) | (1 << v) | (1 << u) | (1 << least(miss))
                            w = find_induced_p5(g, five)
                            raise P5Found(w) if w else AssertionError("nonadjacent pair without a P5")
            raise LemmaFailure("bip_trichotomy", f"pair u={u}, z={z} yields no pure pair")
    ac, bd = a & ~c_set, b & ~d_set
    if good_pair(ac, bd):
        run.note("bip", route="A minus C complete to B minus D")
        return _pair_outcome(g, ac, bd)
    for side, part, total in (("dense_A", c_set, chi_a), ("dense_B", d_set, chi_b)):
        if part and 2 * run.chi(part) >= total and orc.is_dense(part, 4 * eps):
            run.note("bip", route=f"{side} half")
            return _dense_outcome(part, 4 * eps, side)
    raise LemmaFailure("bip_trichotomy", "neither C nor D is a dense half")


def bip_trichotomy(g: Graph, v: int, a: int, b: int, eps, mode: str = "strict") -> Certificate:
    eps = q(eps)
    run = Run(g, "bip_trichotomy", {"v": v, "eps": eps}, mode, "B")
    _check_bip_inputs(run, v, a, b, eps)
    check_p5_free(g, a | b | (1 << v))
    out = _bip(run, v, a, b, eps)
    chi_a, chi_b = run.chi(a), run.chi(b)
    if out.bullet == "pure":
        claims = _pair_claims(eps * chi_a, eps * chi_b)
    else:
        claims = [("chi(F)", ">=", HALF * (chi_a if out.bullet == "dense_A" else chi_b))]
    return run.certificate(out, {"in_G": a | b | (1 << v), "in_A": a, "in_B": b}, claims)


# ---------------------------------------------------------------------------
# pure pair or dense subgraph


def _check_pod_params(eps: Fraction, delta: Fraction) -> None:
    require(0 < eps < 1, "eps must lie in (0, 1)", eps)
    in_range(delta, Fraction(0), eps * eps / 128, "delta")


def _pure_or_dense(run: Run, s: int, eps: Fraction, delta: Fraction) -> Outcome:
    g, orc = run.g, run.orc
    require(s != 0, "graph must be nonempty")
    chi_s = run.chi(s)
    thr = delta * chi_s

    def pair_ok(x: int, y: int) -> bool:
        return bool(x) and bool(y) and classify_pair(g, x, y) is not PairKind.MIXED \
            and run.chi(x) >= thr and run.chi(y) >= thr

    def finish_pair(x: int, y: int, route: str) -> Outcome:
        kind = classify_pair(g, x, y)
        x, y = saturate_pair(g, s, x, y, kind)
        run.note("pure_or_dense", route=route, X=to_list(x), Y=to_list(y))
        return _pair_outcome(g, x, y)

    def dense_ok(f: int) -> bool:
        return bool(f) and run.chi(f) >= thr and orc.is_dense(f, eps)

    if orc.is_dense(s, eps):
        run.note("pure_or_dense", route="whole graph is dense")
        return _dense_outcome(s, eps)
    z_set = 0
    for v in bits(s):
        if 2 * run.chi(s & ~g.nbrs(v)) >= eps * chi_s:
            z_set |= 1 << v
    outside = s & ~z_set
    if 2 * run.chi(outside) >= chi_s and dense_ok(outside):
        run.note("pure_or_dense", route="complement of Z is dense")
        return _dense_outcome(outside, eps)
    if run.chi(z_set) >= 2:
        v = _gyarfas_vertex(run, z_set)
        if v is None:
            raise LemmaFailure("pure_or_dense", "no Gyarfas vertex inside Z")
        nv = g.nbrs(v) & s
        a_set = 0
        for u in bits(nv):
            if run.chi(s & ~(g.nbrs(u) | g.nbrs(v))) >= thr:
                a_set |= 1 << u
        b_set = nv & ~a_set
        run.note("pure_or_dense", route="split N(v)", v=v, A=to_list(a_set), B=to_list(b_set))
        for u in bits(a_set):
            rest = s & ~(g.nbrs(u) | g.nbrs(v))
            if not rest:
                continue
            comp = maximal_component(run, rest)
            xs, ys, mixed = split_on(g, nv & ~g.nbrs(u), comp)
            if mixed:
                # a vertex of N(v) \ N(u) mixed on C closes the path u-v-z-u'-v'
                run.note("substitute", detail="mixed vertex read as z")
                w = find_induced_p5(g, comp | mixed | (1 << u) | (1 << v))
                raise P5Found(w) if w else AssertionError("mixed vertex without a P5")
            for part in (xs & a_set, ys & a_set):
                if pair_ok(part, comp):
                    return finish_pair(part, comp, "part of A against component C")
        if a_set and dense_ok(a_set):
            run.note("pure_or_dense", route="A is dense")
            return _dense_outcome(a_set, eps)
        quarter = eps / 4
        far = s & ~g.closed(v)
        p_set = 0
        if b_set:
            chi_b = run.chi(b_set)
            for z in bits(far):
                if run.chi(b_set & ~g.nbrs(z)) < quarter * chi_b:
                    p_set |= 1 << z
        q_set = far & ~p_set
        candidates = []
        if b_set and p_set:
            with run.nested():
                candidates.append(("bip on (B, P)", _bip(run, v, b_set, p_set, quarter)))
        if run.chi(q_set) >= 2:
            z = _gyarfas_vertex(run, q_set)
            if z is not None:
                t_set = b_set & ~g.nbrs(z)
                e_set = g.nbrs(z) & q_set
                if t_set and e_set and orc.is_dense_to(t_set, e_set, quarter):
                    with run.nested():
                        candidates.append(("bip on (E, T)", _bip(run, z, e_set, t_set, quarter)))
        for route, out in candidates:
            if out.kind == "dense_subgraph":
                if dense_ok(out.sets["F"]):
                    run.note("pure_or_dense", route=route + " gave a dense half")
                    return _dense_outcome(out.sets["F"], eps)
            elif pair_ok(out.sets["X"], out.sets["Y"]):
                return finish_pair(out.sets["X"], out.sets["Y"], route)
    if thr <= 1:
        f = 1 << least(s)
        run.note("fallback", route="single vertex is dense", F=to_list(f))
        return _dense_outcome(f, eps)
    raise LemmaFailure("pure_or_dense", "no pure pair and no dense subgraph found")


def pure_or_dense(g: Graph, eps, delta, ground: Optional[int] = None, mode: str = "strict") -> Certificate:
    eps, delta = q(eps), q(delta)
    _check_pod_params(eps, delta)
    s = _ground(g, ground)
    check_p5_free(g, s)
    run = Run(g, "pure_or_dense", {"eps": eps, "delta": delta}, mode, "B")
    out = _pure_or_dense(run, s, eps, delta)
    thr = delta * run.chi(s)
    claims = _pair_claims(thr, thr) if out.bullet == "pure" else [("chi(F)", ">=", thr)]
    return run.certificate(out, {"in_G": s}, claims)


# ---------------------------------------------------------------------------
# anticomplete pair or dense subgraph by doubling complete blockades


def rodl_delta(eps: Fraction) -> Tuple[Fraction, int, Fraction]:
    """(eta, K, delta) with eta = eps^2/128, K = ceil(log2(1/eps)), delta = eta^K."""
    eta = eps * eps / 128
    k = ceil_log2(1 / eps)
    return eta, k, eta ** k


def _rodl(run: Run, s: int, eps: Fraction) -> Outcome:
    orc = run.orc
    eta, kmax, delta = rodl_delta(eps)
    chi_s = run.chi(s)
    thr = delta * chi_s
    blocks = [s]
    for k in range(kmax):
        nxt = []
        for blk in blocks:
            with run.nested():
                out = _pure_or_dense(run, blk, eps, eta)
            if out.kind == "dense_subgraph":
                f = out.sets["F"]
                if run.chi(f) >= thr:
                    run.note("rodl", route="dense subgraph inside block", level_k=k)
                    return out
                raise LemmaFailure("rodl_chi", "dense subgraph below threshold")
            x, y = out.sets["X"], out.sets["Y"]
            if out.kind == "anticomplete_pair":
                if run.chi(x) >= thr and run.chi(y) >= thr:
                    run.note("rodl", route="anticomplete pair inside block", level_k=k)
                    return Outcome("anticomplete", "anticomplete_pair", {"X": x, "Y": y})
                raise LemmaFailure("rodl_chi", "anticomplete pair below threshold")
            nxt.extend([x, y])
        blocks = nxt
        run.note("rodl", route="blockade doubled", length=len(blocks))
    m = min(run.chi(b) for b in blocks)
    trimmed = []
    for blk in blocks:
        for v in bits(blk):
            if run.chi(blk) == m:
                break
            blk &= ~(1 << v)
        trimmed.append(blk)
    f = 0
    for blk in trimmed:
        f |= blk
    if run.chi(f) >= thr and orc.is_dense(f, eps):
        run.note("rodl", route="union of equalized blocks", m=m)
        return _dense_outcome(f, eps)
    if thr <= 1:
        run.note("fallback", route="equalized union not dense; single vertex")
        return _dense_outcome(1 << least(s), eps)
    raise LemmaFailure("rodl_chi", "equalized union is not dense")


def rodl_chi(g: Graph, eps, ground: Optional[int] = None, mode: str = "strict") -> Certificate:
    eps = q(eps)
    require(0 < eps < 1, "eps must lie in (0, 1)", eps)
    s = _ground(g, ground)
    require(s != 0, "graph must be nonempty")
    check_p5_free(g, s)
    eta, k, delta = rodl_delta(eps)
    run = Run(g, "rodl_chi", {"eps": eps}, mode, "B")
    out = _rodl(run, s, eps)
    thr = delta * run.chi(s)
    claims = _pair_claims(thr, thr) if out.kind == "anticomplete_pair" else [("chi(F)", ">=", thr)]
    if out.kind == "dense_subgraph":
        out.bullet = "dense"
    return run.certificate(out, {"in_G": s}, claims, delta=delta)


# ---------------------------------------------------------------------------
# cutset decomposition


class Escalate(Exception):
    """Carries an outcome of an enclosing procedure out of a nested search."""

    def __init__(self, outcome: Outcome):
        super().__init__(outcome.bullet)
        self.outcome = outcome


Handler = Callable[[int], Optional[Tuple[int, int]]]


def _grow_full(g: Graph, f: int, a: int, b: int) -> Tuple[int, int]:
    """Grow (A, B) until each is a full component of F minus the other's closed neighbourhood."""
    while True:
        na = _component_containing(g, f & ~(b | union_nbrs(g, b)), a)
        nb = _component_containing(g, f & ~(na | union_nbrs(g, na)), b)
        if (na, nb) == (a, b):
            return a, b
        a, b = na, nb


def _component_containing(g: Graph, region: int, part: int) -> int:
    for c in components(g, region):
        if c & part:
            return c
    return 0


def _sparse_pair(run: Run, f: int, p: Fraction) -> Tuple[Optional[Tuple[int, int]], bool]:
    """Connected anticomplete (A, B) in G[F] with chi(A) >= chi(B) >= p.

    Maximizes chi(A)+chi(B), then |A|+|B|.  Returns (pair, exhaustive).
    """
    g = run.g
    best = None
    best_key = None
    count = 0
    exhaustive = True
    seen = set()
    for bset in connected_subsets(g, f, SPARSE_SEARCH_LIMIT + 1):
        count += 1
        if count > SPARSE_SEARCH_LIMIT:
            exhaustive = False
            break
        region = f & ~(bset | union_nbrs(g, bset))
        for a in components(g, region):
            if run.chi(a) < p:
                continue
            a2, b2 = _grow_full(g, f, a, bset)
            if (a2, b2) in seen:
                continue
            seen.add((a2, b2))
            ca, cb = run.chi(a2), run.chi(b2)
            if min(ca, cb) < p:
                continue
            if cb > ca:
                a2, b2, ca, cb = b2, a2, cb, ca
            key = (ca + cb, size(a2) + size(b2), -least(a2 | b2))
            if best_key is None or key > best_key:
                best, best_key = (a2, b2), key
    if not exhaustive:
        # seeded alternation from every vertex pair
        for u in bits(f):
            for w in bits(f & ~g.closed(u)):
                a2, b2 = _grow_full(g, f, 1 << u, 1 << w)
                if not a2 or not b2:
                    continue
                ca, cb = run.chi(a2), run.chi(b2)
                if min(ca, cb) < p:
                    continue
                if cb > ca:
                    a2, b2, ca, cb = b2, a2, cb, ca
                key = (ca + cb, size(a2) + size(b2), -least(a2 | b2))
                if best_key is None or key > best_key:
                    best, best_key = (a2, b2), key
    return best, exhaustive


def _sparse_claim(run: Run, f: int, p: Fraction, handler: Optional[Handler]) -> Tuple[int, int, int]:
    """Cutset Z of G[F] separating a maximal sparse pair; returns (A, B, Z)."""
    g = run.g
    pair, exhaustive = _sparse_pair(run, f, p)
    run.note("sparse_search", region=to_list(f), exhaustive=exhaustive, found=pair is not None)
    if pair is None:
        got = handler(f) if handler is not None else None
        if got is None:
            raise SparsityFailure("no anticomplete pair with chi >= p in a high-chi induced subgraph", f)
        comps_a = [c for c in components(g, got[0]) if run.chi(c) == run.chi(got[0])]
        comps_b = [c for c in components(g, got[1]) if run.chi(c) == run.chi(got[1])]
        a, b = _grow_full(g, f, comps_a[0], comps_b[0])
        if run.chi(b) > run.chi(a):
            a, b = b, a
        pair = (a, b)
    a, b = pair
    z = union_nbrs(g, a) & f
    return a, b, z


def _decompose(run: Run, s: int, eps: Fraction, p: Fraction, qv: Fraction,
               handler: Optional[Handler] = None) -> Outcome:
    g, orc = run.g, run.orc
    chi_s = run.chi(s)
    e4 = eps ** 4 * chi_s
    t1a, t1b = qv - 2 * e4, (1 - eps ** 2) * chi_s
    t3 = 2 * eps ** 3 * chi_s

    def anti_ok(x: int, y: int) -> bool:
        return bool(x) and bool(y) and run.chi(x) >= t1a and run.chi(y) >= t1b \
            and classify_pair(g, x, y) is PairKind.ANTICOMPLETE

    def complete_ok(x: int, y: int) -> bool:
        return bool(x) and bool(y) and run.chi(x) >= e4 and run.chi(y) >= p \
            and classify_pair(g, x, y) is PairKind.COMPLETE

    def anti_out(x, y, route):
        run.note("decompose", route=route)
        return Outcome("anticomplete", "anticomplete_pair", {"X": x, "Y": y})

    def complete_out(x, y, route):
        run.note("decompose", route=route)
        return Outcome("complete", "complete_pair", {"X": x, "Y": y})

    comps = components(g, s)
    if len(comps) > 1:
        k = maximal_component(run, s)
        rest = s & ~k
        for x, y in ((k, rest), (rest, k)):
            if anti_ok(x, y):
                return anti_out(x, y, "disconnected: maximal component against the rest")
        f = k
        run.note("decompose", route="restrict to maximal component", F=to_list(f))
    else:
        f = s

    def check_cut(a: int, b: int, z: int) -> Optional[Outcome]:
        za = zb = 0
        for v in bits(z):
            if g.nbrs(v) & a == a:
                za |= 1 << v
            elif g.nbrs(v) & b == b:
                zb |= 1 << v
            else:
                w = find_induced_p5(g, a | b | (1 << v))
                raise P5Found(w) if w else AssertionError("cutset vertex pure to neither side")
        for x, y in ((za, a), (zb, b)):
            if complete_ok(x, y):
                return complete_out(x, y, "cutset part complete to one side")
        return None

    a, b, z = _sparse_claim(run, f, p, handler)
    hit = check_cut(a, b, z)
    if hit:
        return hit
    d = z
    bs = []
    e = 0
    for c in components(g, f & ~(a | z)):
        if run.chi(c) >= p:
            bs.append(c)
        else:
            e |= c
    rounds = 0
    while run.chi(a) >= qv:
        rounds += 1
        a2, b2, s2 = _sparse_claim(run, a, p, handler)
        hit = check_cut(a2, b2, s2)
        if hit:
            return hit
        inner = a & ~(a2 | s2)
        for c in components(g, inner):
            if run.chi(c) >= p:
                bs.append(c)
            else:
                e |= c
        d |= s2
        a = a2
    run.note("decompose", route="partition", A=to_list(a), D=to_list(d), k=len(bs), refinements=rounds)
    s_set = r_set = 0
    for v in bits(d):
        nb = g.nbrs(v) & a
        if nb == a:
            r_set |= 1 << v
        elif nb:
            s_set |= 1 << v
    if complete_ok(r_set, a):
        return complete_out(r_set, a, "vertices of D complete to A")
    for v in bits(s_set):
        for bi in bs:
            if not g.nbrs(v) & bi:
                continue
            si = 0
            for u in bits(s_set & ~g.closed(v)):
                if g.nbrs(u) & bi:
                    si |= 1 << u
            if complete_ok(si, bi):
                return complete_out(si, bi, "part of S complete to a component B_i")
    if s_set and run.chi(s_set) >= t3 and orc.is_dense(s_set, eps):
        run.note("decompose", route="S is dense")
        return _dense_outcome(s_set, eps)
    rest = 0
    for bi in bs:
        rest |= bi
    rest |= (d & ~(r_set | s_set)) | e
    if anti_ok(a, rest):
        return anti_out(a, rest, "A against everything it misses")
    if t3 <= 1:
        run.note("fallback", route="single vertex is dense")
        return _dense_outcome(1 << least(s), eps)
    raise LemmaFailure("decompose_anti", "no outcome reached after the decomposition")


def _check_decompose_params(chi_s: int, eps: Fraction, p: Fraction, qv: Fraction) -> None:
    in_range(eps, Fraction(0), Fraction(1, 4), "eps")
    require(0 < p, "p must be positive", p)
    require(p <= qv, "p must not exceed q", (p, qv))
    require(qv <= (1 - eps ** 2) * chi_s, "q must not exceed (1 - eps^2) chi(G)", qv)


def _decompose_claims(out: Outcome, eps: Fraction, p: Fraction, qv: Fraction, chi_s: int):
    if out.bullet == "anticomplete":
        return _pair_claims(qv - 2 * eps ** 4 * chi_s, (1 - eps ** 2) * chi_s)
    if out.bullet == "complete":
        return _pair_claims(eps ** 4 * chi_s, p)
    return [("chi(F)", ">=", 2 * eps ** 3 * chi_s)]


def decompose_anti(g: Graph, eps, p, qv, ground: Optional[int] = None, mode: str = "strict",
                   handler: Optional[Handler] = None) -> Certificate:
    """Cutset decomposition of a sparse graph (p, q given as exact rationals)."""
    eps, p, qv = q(eps), q(p), q(qv)
    s = _ground(g, ground)
    require(s != 0, "graph must be nonempty")
    check_p5_free(g, s)
    run = Run(g, "decompose_anti", {"eps": eps, "p": p, "q": qv}, mode, "B")
    chi_s = run.chi(s)
    _check_decompose_params(chi_s, eps, p, qv)
    out = _decompose(run, s, eps, p, qv, handler)
    return run.certificate(out, {"in_G": s}, _decompose_claims(out, eps, p, qv, chi_s))


# ---------------------------------------------------------------------------
# phi products and anticomplete growth


def phi_eval(c, r: int, s: Optional[int] = None) -> Fraction:
    """phi_{r,s}(c) = prod_{r < i <= s} (1 - c^(2^(i+1))); phi_eval(c, s) is phi_s(c)."""
    c = q(c)
    if s is None:
        r, s = 0, r
    require(0 <= r <= s, "need 0 <= r <= s", (r, s))
    out = Fraction(1)
    for i in range(r + 1, s + 1):
        out *= 1 - c ** (2 ** (i + 1))
    return out


def grow_thresholds(c: Fraction, s: int, bullet: str, r: int, chi_s: int) -> List[Tuple[str, str, Fraction]]:
    """Claims of each bullet of the growth statement."""
    if bullet == "anticomplete":
        t = (1 - 2 * c ** (2 ** (s + 1))) * chi_s
        return _pair_claims(t, t)
    if bullet == "complete_balanced":
        t = phi_eval(c, 0, s) * c ** 4 * chi_s
        return _pair_claims(t, t)
    ph = phi_eval(c, r, s)
    if bullet == "complete_unbalanced":
        return _pair_claims(ph * c ** (2 ** (r + 2)) * chi_s, ph * (1 - 3 * c ** (2 ** r)) * chi_s)
    if bullet == "dense":
        return [("chi(F)", ">=", ph * 2 * c ** (3 * 2 ** r) * chi_s)]
    raise ValueError(f"unknown bullet {bullet!r}")


def _meets(run: Run, out: Outcome, claims) -> bool:
    for meaning, rel, rhs in claims:
        name = meaning[4:-1]
        if run.chi(out.sets[name]) < rhs:
            return False
    if out.kind == "dense_subgraph":
        return run.orc.is_dense(out.sets["F"], out.info["density"])
    return True


def _grow(run: Run, s: int, c: Fraction, level: int) -> Outcome:
    """Anticomplete growth statement at depth ``level`` on G[S]."""
    chi_s = run.chi(s)

    def lift(out: Outcome) -> Outcome:
        claims = grow_thresholds(c, level, out.bullet, out.info.get("r", 0), chi_s)
        if not _meets(run, out, claims):
            raise LemmaFailure("grow_anticomplete", f"nested {out.bullet} outcome misses level-{level} thresholds")
        return out

    if level == 0:
        eps = c
        p, qv = c ** 4 * chi_s, (1 - c ** 2) * chi_s

        def handler(region: int):
            with run.nested():
                sub = _pure_or_dense(run, region, c, c * c / 128)
            if sub.kind == "dense_subgraph":
                out = Outcome("dense", "dense_subgraph", {"F": sub.sets["F"]}, {"density": c, "r": 0})
                raise Escalate(lift(out))
            if sub.kind == "complete_pair":
                out = Outcome("complete_balanced", "complete_pair", dict(sub.sets), {"r": 0})
                raise Escalate(lift(out))
            return sub.sets["X"], sub.sets["Y"]
    else:
        eps = c ** (2 ** level)
        p, qv = (1 - 3 * eps) * chi_s, (1 - eps ** 2) * chi_s

        def handler(region: int):
            with run.nested():
                sub = _grow(run, region, c, level - 1)
            if sub.bullet == "anticomplete":
                return sub.sets["X"], sub.sets["Y"]
            raise Escalate(lift(sub))
    if p > qv or not chi_s:
        raise LemmaFailure("grow_anticomplete", "degenerate thresholds")
    try:
        with run.nested():
            res = _decompose(run, s, eps, p, qv, handler)
    except Escalate as esc:
        run.note("grow", route="escalated from nested search", bullet=esc.outcome.bullet, depth=level)
        return esc.outcome
    except SparsityFailure as exc:
        run.note("grow", route="sparsity search failed", region=to_list(exc.region), depth=level)
        res = None
    if res is not None:
        if res.bullet == "anticomplete":
            out = Outcome("anticomplete", "anticomplete_pair", dict(res.sets), {"r": level})
        elif res.bullet == "complete":
            if level == 0:
                out = Outcome("complete_balanced", "complete_pair", dict(res.sets), {"r": 0})
            else:
                out = Outcome("complete_unbalanced", "complete_pair", dict(res.sets), {"r": level})
        else:
            out = Outcome("dense", "dense_subgraph", {"F": res.sets["F"]}, {"density": eps, "r": level})
        claims = grow_thresholds(c, level, out.bullet, out.info["r"], chi_s)
        if _meets(run, out, claims):
            run.note("grow", route=f"decomposition gave {res.bullet}", depth=level)
            return out
    dense_thr = grow_thresholds(c, level, "dense", level, chi_s)[0][2]
    if dense_thr <= 1:
        run.note("fallback", route="single vertex is dense", depth=level)
        return Outcome("dense", "dense_subgraph", {"F": 1 << least(s)}, {"density": eps, "r": level})
    raise LemmaFailure("grow_anticomplete", "no bullet reached")


def grow_anticomplete(g: Graph, c, s: int, ground: Optional[int] = None, mode: str = "strict") -> Certificate:
    c = in_range(q(c), Fraction(0), C_MAX, "c")
    require(isinstance(s, int) and s >= 0, "s must be a nonnegative integer", s)
    ground = _ground(g, ground)
    require(ground != 0, "graph must be nonempty")
    check_p5_free(g, ground)
    run = Run(g, "grow_anticomplete", {"c": c, "s": s}, mode, "B")
    out = _grow(run, ground, c, s)
    claims = grow_thresholds(c, s, out.bullet, out.info.get("r", 0), run.chi(ground))
    return run.certificate(out, {"in_G": ground}, claims)


# ---------------------------------------------------------------------------
# anti-or-dense endgame


def _as_int_exponent(a) -> int:
    a = q(a)
    require(a.denominator == 1, "a must be an integer", a)
    require(a >= 5, "a must be at least 5", a)
    return int(a)


def _toobig_level(c: Fraction, a: int, w: int) -> Optional[int]:
    """Largest s >= 0 with (1/c)^(2^s * a) <= w, or None when s = 0 already fails."""
    if not pow_at_most(1 / c, a, Fraction(w)):
        return None
    s = 0
    while pow_at_most(1 / c, 2 ** (s + 1) * a, Fraction(w)):
        s += 1
    return s


def anti_or_dense_claims(bullet: str, a: int, c: Fraction, chi_s: int, y: Optional[Fraction] = None,
                         eps: Optional[Fraction] = None):
    if bullet == "complete_balanced":
        return _pair_claims(c ** 5 * chi_s, c ** 5 * chi_s)
    if bullet == "complete_unbalanced":
        return [power_claim("X", 1 / y, 2 * a, Fraction(chi_s)), ("chi(Y)", ">=", (1 - y) * chi_s)]
    return [power_claim("F", 1 / eps, 3, Fraction(chi_s))]


def _anti_or_dense(run: Run, s: int, a: int, c: Fraction) -> Outcome:
    g = run.g
    chi_s = run.chi(s)
    f = maximal_component(run, s)
    if f != s:
        run.note("anti_or_dense", route="restrict to maximal component", F=to_list(f))
    level = _toobig_level(c, a, chi_s)
    run.gate(level is not None, f"chi(G) >= c^-a with a={a}")
    if level is None:
        level = 0
    with run.nested():
        out = _grow(run, f, c, level)
    bal = c ** 5 * chi_s

    def balanced(x: int, y: int, route: str) -> Optional[Outcome]:
        if x and y and run.chi(x) >= bal and run.chi(y) >= bal and classify_pair(g, x, y) is PairKind.COMPLETE:
            run.note("anti_or_dense", route=route)
            return Outcome("complete_balanced", "complete_pair", {"X": x, "Y": y})
        return None

    if out.bullet == "complete_balanced":
        hit = balanced(out.sets["X"], out.sets["Y"], "balanced complete pair from growth")
        if hit:
            return hit
    elif out.bullet == "complete_unbalanced":
        r = out.info["r"]
        y = c ** (2 ** (r - 1))
        x_set, y_set = out.sets["X"], out.sets["Y"]
        if pow_at_least(1 / y, 2 * a, Fraction(chi_s, run.chi(x_set))) and run.chi(y_set) >= (1 - y) * chi_s:
            run.note("anti_or_dense", route="unbalanced complete pair from growth", r=r)
            return Outcome("complete_unbalanced", "complete_pair", {"X": x_set, "Y": y_set}, {"y": y})
    elif out.bullet == "dense":
        r = out.info["r"]
        eps = c ** (2 ** r)
        fset = out.sets["F"]
        # eps >= chi^(-1/a)  <=>  (1/eps)^a <= chi
        if pow_at_most(1 / eps, a, Fraction(chi_s)):
            if pow_at_least(1 / eps, 3, Fraction(chi_s, run.chi(fset))):
                run.note("anti_or_dense", route="dense subgraph from growth", r=r)
                return Outcome("dense", "dense_subgraph", {"F": fset}, {"density": eps})
        else:
            run.note("anti_or_dense", route="dense parameter below chi^(-1/a); converting", r=r)
            for v in bits(fset):
                hit = balanced(1 << v, g.nbrs(v) & fset, "vertex and its neighbourhood inside F")
                if hit:
                    return hit
    else:
        x_set, y_set = _grow_full(g, f, out.sets["X"], out.sets["Y"])
        z = union_nbrs(g, x_set) & f
        if z:
            v = least(z)
            nb = g.nbrs(v)
            if nb & x_set != x_set and nb & y_set != y_set:
                w = find_induced_p5(g, x_set | y_set | (1 << v))
                raise P5Found(w) if w else AssertionError("cutset vertex pure to neither side")
            ny = nb & s
            y = 1 - Fraction(run.chi(ny), chi_s)
            if 0 < y < 1 and pow_at_least(1 / y, 2 * a, Fraction(chi_s)):
                run.note("anti_or_dense", route="cutset vertex and its neighbourhood", v=v)
                return Outcome("complete_unbalanced", "complete_pair", {"X": 1 << v, "Y": ny}, {"y": y})
    for u, v in g.edges():
        if (s >> u & 1) and (s >> v & 1):
            hit = balanced(1 << u, 1 << v, "fallback: an edge is a balanced complete pair")
            if hit:
                run.note("fallback", route="edge")
                return hit
            break
    raise LemmaFailure("anti_or_dense", f"growth outcome {out.bullet} could not be converted")


def anti_or_dense(g: Graph, a, c, mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    a_int = _as_int_exponent(a)
    c = in_range(q(c), Fraction(0), C_MAX, "c")
    s = _ground(g, ground)
    require(s != 0, "graph must be nonempty")
    check_p5_free(g, s)
    run = Run(g, "anti_or_dense", {"a": a_int, "c": c}, mode, "C")
    chi_s = run.chi(s)
    if run.relaxed:
        require(chi_s >= 2, "relaxed mode needs chi(G) >= 2", chi_s)
    out = _anti_or_dense(run, s, a_int, c)
    claims = anti_or_dense_claims(out.bullet, a_int, c, chi_s, out.info.get("y"), out.info.get("density"))
    return run.certificate(out, {"in_G": s}, claims)


# ---------------------------------------------------------------------------
# mixed-vertex invariant


def mixed_violation(g: Graph, a: int, b: int) -> Optional[int]:
    """A vertex outside A u B mixed on both connected anticomplete sets, if any."""
    for v in bits(g.full & ~(a | b)):
        na, nb = g.nbrs(v) & a, g.nbrs(v) & b
        if na and na != a and nb and nb != b:
            return v
    return None


def mixed_invariant_scan(g: Graph, limit: int = 2000) -> Optional[Tuple[int, int, int]]:
    """Search connected anticomplete pairs (A, B) for a vertex mixed on both.

    Returns (A, B, v) for the first violation found, else None.  The scan is
    exhaustive whenever G has at most ``limit`` connected subsets.
    """
    subsets = list(connected_subsets(g, g.full, limit))
    for a in subsets:
        region = g.full & ~(a | union_nbrs(g, a))
        if not region:
            continue
        for b in subsets:
            if b & ~region:
                continue
            v = mixed_violation(g, a, b)
            if v is not None:
                return a, b, v
    return None


__all__ = [
    "Escalate", "GyarfasWitness", "anti_or_dense", "anti_or_dense_claims", "bip_trichotomy",
    "decompose_anti", "grow_anticomplete", "grow_thresholds", "gyarfas_vertex", "mixed_invariant_scan",
    "mixed_violation", "phi_eval", "pure_or_dense", "rodl_chi", "rodl_delta",
]
