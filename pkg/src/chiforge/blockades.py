"""Blockade conversion, the anticomplete-or-dense midway step and the second increment round.

Layout refinement turns pure-or-dense blockades into long blockades whose
ordered pairs are anticomplete or dense; a pattern graph over those blocks
then yields a homogeneous blockade.  The second round runs density
increment on dense blockades and ends with a complete blockade, and the
main trichotomy chains the high-chi pair lemma with that round.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .certificate import Certificate, pow_at_least, pow_at_most, power_claim
from .chi_oracles import P5Found, oracle_for
from .density_increment import _round1
from .exact import ceil_root, floor_sqrt_q, q
from .graph_core import (Graph, PairKind, bits, classify_pair, components, find_induced_p5, from_iter, least, size,
                         to_list)
from .ledger import A1, A2, B_MID, D
from .procedure import (LemmaFailure, Outcome, PreconditionError, Run, anticomponents, blockade_outcome,
                        blocks_of, check_p5_free, equal_chi_partition, in_range, maximal_component, require)
from .structure_lemmas import _anti_or_dense

HALF = Fraction(1, 2)
INCRE2_Y_MAX = Fraction(1, 2 ** 8)
ITERATE2_Y_MAX = Fraction(1, 2 ** 16)
ROUND2_EPS_MAX = Fraction(1, 2 ** 32)
ROUND2_RELAXED_EPS_MAX = Fraction(1, 16)
MAIN_C = Fraction(1, 2 ** 32)
RELAXED_B = 6

# supplier(run, F) -> blocks of a pure or (x,chi)-dense blockade in G[F], or None
Supplier = Callable[[Run, int], Optional[List[int]]]


def _ground(g: Graph, ground: Optional[int]) -> int:
    s = g.full if ground is None else ground
    g.check_set(s)
    return s


def _int_param(v, name: str, lo: int) -> int:
    v = q(v)
    require(v.denominator == 1 and v >= lo, f"{name} must be an integer >= {lo}", v)
    return int(v)


def _exponent_from_b(b: int) -> int:
    """The a with b = 6 a^3; b must have that form."""
    require(b % 6 == 0, "b must equal 6 a^3 for an integer a", b)
    a = round((b // 6) ** (1 / 3))
    for cand in (a - 1, a, a + 1):
        if cand >= 1 and 6 * cand ** 3 == b:
            return cand
    raise PreconditionError("b must equal 6 a^3 for an integer a", b)


def _ordered_tag(g: Graph, run: Run, blocks: List[int], eps: Fraction) -> Optional[str]:
    """'anticomplete', 'dense' or 'anti_or_dense' for blocks whose later members are
    anticomplete or (eps,chi)-dense to earlier ones; None if some pair is neither."""
    anti = dense = True
    for j in range(len(blocks)):
        for i in range(j):
            if classify_pair(g, blocks[i], blocks[j]) is PairKind.ANTICOMPLETE:
                dense = False
                continue
            anti = False
            ok, _ = run.orc.density_check(0, eps, "to", a=blocks[i], b=blocks[j])
            if not ok:
                return None
    if anti:
        return "anticomplete"
    return "dense" if dense else "anti_or_dense"


# ---------------------------------------------------------------------------
# layout refinement


def _grouped(run: Run, parts: List[int], chi_f: int, k: int, a: int) -> List[int]:
    """k unions of pairwise complete parts, balanced by chi; empty if some union stays too small.

    Parts go largest first into the union of least chi, which is additive here.
    """
    bins, sums = [0] * k, [0] * k
    for p in sorted(parts, key=lambda m: (-run.chi(m), least(m))):
        i = min(range(k), key=lambda j: (sums[j], j))
        bins[i] |= p
        sums[i] += run.chi(p)
    if all(b and run.chi(b) * k ** a >= chi_f for b in bins):
        return bins
    return []


def default_supplier(x: Fraction, a: int) -> Supplier:
    """Components, anticomponent groups, groups of a maximum clique, then the round-one driver.

    Every candidate has length k in [2, 1/x] and blocks with chi >= k^-a chi(F).
    """
    kmax = int(1 / x)

    def supply(run: Run, f: int) -> Optional[List[int]]:
        g = run.g
        chi_f = run.chi(f)
        comps = components(g, f)
        for k in range(min(kmax, len(comps)), 1, -1):
            big = [c for c in comps if run.chi(c) * k ** a >= chi_f]
            if len(big) >= k:
                run.note("supplier", route="components", k=k)
                return big[:k]
        acs = anticomponents(g, f)
        for k in range(min(kmax, len(acs)), 1, -1):
            groups = _grouped(run, acs, chi_f, k, a)
            if len(groups) >= k:
                run.note("supplier", route="anticomponent groups", k=k)
                return groups[:k]
        clique = to_list(run.orc.clique(f))
        for k in range(min(kmax, len(clique)), 1, -1):
            t = -(-chi_f // k ** a)
            if k * t <= len(clique):
                run.note("supplier", route="clique groups", k=k)
                return [from_iter(clique[i * t:(i + 1) * t]) for i in range(k)]
        if size(f) < 2:
            return None
        try:
            with run.nested():
                out = _round1(run, f, x)
        except LemmaFailure:
            return None
        blocks = blocks_of(out)
        k = len(blocks)
        if 2 <= k <= kmax and all(run.chi(b) * k ** a >= chi_f for b in blocks):
            run.note("supplier", route="round-one driver", k=k)
            return blocks
        return None

    return supply


def _check_supplied(run: Run, f: int, blocks: List[int], x: Fraction, a: int) -> None:
    g = run.g
    k = len(blocks)
    require(2 <= k <= 1 / x, "supplied blockade length must lie in [2, 1/x]", to_list(f))
    seen = 0
    for blk in blocks:
        require(blk != 0 and blk & ~f == 0 and blk & seen == 0, "supplied blocks must be disjoint nonempty subsets of F",
                to_list(f))
        seen |= blk
    chi_f = run.chi(f)
    for blk in blocks:
        # chi(B_p)^(1/a) >= chi(F)^(1/a) / k keeps sum chi^(1/a) from shrinking
        require(run.chi(blk) * k ** a >= chi_f, "supplied block below k^-a chi(F)", to_list(blk))
    for j in range(k):
        for i in range(j):
            if classify_pair(g, blocks[i], blocks[j]) is not PairKind.MIXED:
                continue
            ok, _ = run.orc.density_check(0, x, "to", a=blocks[i], b=blocks[j])
            require(ok, "supplied pair is neither pure nor (x,chi)-dense", (to_list(blocks[i]), to_list(blocks[j])))


def _layout_ok(run: Run, layout: List[int], bound: Fraction) -> bool:
    """Every later block is anticomplete to an earlier one, or each of its
    vertices misses a set of chromatic number below ``bound`` there."""
    g = run.g
    for j in range(len(layout)):
        for i in range(j):
            if classify_pair(g, layout[i], layout[j]) is PairKind.ANTICOMPLETE:
                continue
            if any(run.chi(layout[i] & ~g.nbrs(v)) >= bound for v in bits(layout[j])):
                return False
    return True


def _convert(run: Run, s: int, eps: Fraction, a: int, supply: Supplier) -> Outcome:
    g = run.g
    chi_s = run.chi(s)
    x = eps ** (3 * a)
    ea = eps ** a
    layout = [s]
    while True:
        if len(layout) * eps >= 1:
            run.note("convert", route="layout is long", ell=len(layout))
            blocks = layout
            break
        big = max(layout, key=lambda m: (run.chi(m), -least(m)))
        if run.chi(big) < ea * chi_s:
            run.fail("largest layout block below eps^a chi(G)")
        blocks = supply(run, big)
        if blocks is None:
            raise PreconditionError("inner supplier found no blockade", to_list(big))
        _check_supplied(run, big, blocks, x, a)
        if len(blocks) * eps >= 1:
            run.note("convert", route="supplied blockade is long", k=len(blocks))
            break
        for blk in blocks:
            if run.chi(blk) < eps ** (2 * a) * chi_s:
                run.fail("refined block below eps^(2a) chi(G)")
        pos = layout.index(big)
        layout = layout[:pos] + blocks + layout[pos + 1:]
        if not _layout_ok(run, layout, x * chi_s):
            run.fail("layout refinement broke the wrong-pair bound")
        run.note("convert", route="refine", at=pos, k=len(blocks), ell=len(layout))
    tag = _ordered_tag(g, run, blocks, ea)
    if tag is None:
        run.fail("an ordered block pair is neither anticomplete nor (eps^a,chi)-dense")
    for blk in blocks:
        if not pow_at_least(1 / x, 2 * a, Fraction(chi_s, run.chi(blk))):
            run.fail("output block below x^(2a) chi(G)")
    return blockade_outcome("blockade", blocks, tag, ea if tag != "anticomplete" else None)


def convert_claims(k: int, chi_s: int, eps: Fraction, a: int):
    x = eps ** (3 * a)
    return [("count(B)", ">=", 1 / eps)] + [power_claim(f"B{i}", 1 / x, 2 * a, Fraction(chi_s))
                                              for i in range(1, k + 1)]


def convert_blockade(g: Graph, eps, a, inner: Optional[Callable[[Graph, int], Optional[List[int]]]] = None,
                     mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    """Blockade of length >= 1/eps, later blocks anticomplete or (eps^a,chi)-dense to earlier ones."""
    eps = in_range(q(eps), Fraction(0), HALF, "eps")
    a = _int_param(a, "a", 1)
    s = _ground(g, ground)
    require(s != 0, "graph must be nonempty")
    run = Run(g, "convert_blockade", {"eps": eps, "a": a}, mode, "C")
    chi_s = run.chi(s)
    run.gate(pow_at_most(1 / eps, 3 * a * a, Fraction(chi_s)), "chi(G) >= eps^(-3a^2)")
    check_p5_free(g, s)
    x = eps ** (3 * a)
    supply = default_supplier(x, a) if inner is None else (lambda r, f: inner(r.g, f))
    out = _convert(run, s, eps, a, supply)
    return run.certificate(out, {"in_G": s}, convert_claims(len(blocks_of(out)), chi_s, eps, a))


# ---------------------------------------------------------------------------
# midway: anticomplete or dense blockade


def pattern_graph(g: Graph, blocks: List[int]) -> Graph:
    """Vertex i ~ j iff blocks i and j are not anticomplete."""
    edges = [(i, j) for j in range(len(blocks)) for i in range(j)
             if classify_pair(g, blocks[i], blocks[j]) is not PairKind.ANTICOMPLETE]
    return Graph.from_edges(len(blocks), edges)


def _midway(run: Run, s: int, eps: Fraction, a: int, supply: Optional[Supplier] = None) -> Outcome:
    g = run.g
    ea = eps ** a
    supply = supply or default_supplier(ea ** (3 * a), a)
    with run.nested():
        conv = _convert(run, s, ea, a, supply)
    blocks = blocks_of(conv)
    pat = pattern_graph(g, blocks)
    if find_induced_p5(pat) is not None:
        raise AssertionError("pattern graph of a P5-free graph contains an induced P5")
    porc = oracle_for(pat)
    cl, st = porc.clique(), porc.stable()
    side, chosen = ("clique", cl) if size(cl) >= size(st) else ("stable", st)
    need = ceil_root(len(blocks), a)
    run.note("midway", route=f"pattern {side}", ell=len(blocks), size=size(chosen), eh_bound=need,
             eh_bound_met=size(chosen) >= need)
    if size(chosen) * eps < 1:
        run.fail(f"largest clique or stable set of the pattern has {size(chosen)} < 1/eps vertices")
    picked = [blocks[i] for i in bits(chosen)]
    if side == "stable":
        return blockade_outcome("anticomplete", picked, "anticomplete")
    return blockade_outcome("dense", picked, "dense", eps)


def midway_claims(k: int, chi_s: int, eps: Fraction, b: int):
    return [("count(B)", ">=", 1 / eps)] + [power_claim(f"B{i}", 1 / eps, b, Fraction(chi_s))
                                              for i in range(1, k + 1)]


def _midway_b(b, relaxed: bool) -> Tuple[int, int]:
    if relaxed:
        b = _int_param(RELAXED_B if b is None else b, "b", 6)
        return b, _exponent_from_b(b)
    require(b is None or q(b) == B_MID, f"strict mode uses b = {B_MID}", b)
    return B_MID, A1


def midway_blockade(g: Graph, eps, b=None, mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    """Anticomplete or (eps,chi)-dense blockade of length >= 1/eps with blocks >= eps^b chi(G)."""
    eps = in_range(q(eps), Fraction(0), HALF, "eps")
    s = _ground(g, ground)
    require(s != 0, "graph must be nonempty")
    run = Run(g, "midway_blockade", {"eps": eps}, mode, "C")
    b, a = _midway_b(b, run.relaxed)
    run.builder.params.update({"b": b, "a": a})
    chi_s = run.chi(s)
    run.gate(pow_at_most(1 / eps, b, Fraction(chi_s)), "chi(G) >= eps^-b")
    check_p5_free(g, s)
    out = _midway(run, s, eps, a)
    k = len(blocks_of(out))
    for blk in blocks_of(out):
        if not pow_at_least(1 / eps, b, Fraction(chi_s, run.chi(blk))):
            run.fail("midway block below eps^b chi(G)")
    return run.certificate(out, {"in_G": s}, midway_claims(k, chi_s, eps, b))


# ---------------------------------------------------------------------------
# extracting complete pieces from anticomplete anticonnected sets


def _check_extract_inputs(run: Run, a_sets: List[int], bs: List[int], rs: List[Fraction]) -> None:
    g = run.g
    require(bs and a_sets, "need at least one A and one B")
    seen = 0
    for m in a_sets + bs:
        require(m != 0, "sets must be nonempty")
        require(m & seen == 0, "sets must be pairwise disjoint", to_list(m & seen))
        seen |= m
    for r in rs:
        require(r > 0, "r must be positive", r)
    for j in range(len(bs)):
        require(size(bs[j]) == 1 or len(anticomponents(g, bs[j])) == 1, f"G[B{j + 1}] must be anticonnected",
                to_list(bs[j]))
        for i in range(j):
            require(classify_pair(g, bs[i], bs[j]) is PairKind.ANTICOMPLETE, "B sets must be pairwise anticomplete",
                    (i + 1, j + 1))
    union_b = 0
    for m in bs:
        union_b |= m
    for a, r in zip(a_sets, rs):
        for v in bits(a):
            mixed = [i for i, m in enumerate(bs) if g.nbrs(v) & m and g.nbrs(v) & m != m]
            require(len(mixed) <= 1, "a vertex of A is mixed on two B sets", v)
        for u in bits(union_b):
            require(run.chi(a & ~g.nbrs(u)) <= r, "chi(A minus N(v)) must be at most r on the B sets", u)


def _extract(run: Run, a: int, bs: List[int], r: Fraction) -> Outcome:
    g = run.g
    k = len(bs)
    chi_a = run.chi(a)
    d = 0
    for v in bits(a):
        if any(not g.nbrs(v) & m for m in bs):
            d |= 1 << v
    rest = a & ~d
    ds = []
    for m in bs:
        mixed = 0
        for v in bits(rest):
            if g.nbrs(v) & m != m:
                mixed |= 1 << v
        ds.append(mixed)
    small = [i for i in range(k) if k * run.chi(ds[i]) <= chi_a]
    run.note("extract", D=to_list(d), small=[i + 1 for i in small])
    if (k - len(small)) ** 2 <= k:
        sets, idx = {}, []
        for n, i in enumerate(small, 1):
            x = a & ~(d | ds[i])
            # x may be empty when the threshold is not positive; the pair then holds vacuously
            complete = not x or classify_pair(g, x, bs[i]) is PairKind.COMPLETE
            if not complete or run.chi(x) < (1 - Fraction(1, k)) * chi_a - k * r:
                run.fail(f"A minus (D u D_{i + 1}) is not a large set complete to B_{i + 1}")
            sets[f"X{n}"], sets[f"Y{n}"] = x, bs[i]
            idx.append(i + 1)
        return Outcome("complete_pairs", "pair_family", sets, {"index": idx})
    big = [ds[i] for i in range(k) if i not in small]
    for j in range(len(big)):
        for i in range(j):
            if classify_pair(g, big[i], big[j]) is not PairKind.COMPLETE:
                w = find_induced_p5(g)
                if w is None:
                    raise AssertionError("mixed-vertex sets are not complete yet no induced P5 exists")
                raise P5Found(w)
    return blockade_outcome("complete_blockade", big, "complete")


def extract_claims(out: Outcome, k: int, chi_a: int, r: Fraction):
    if out.bullet == "complete_pairs":
        m = len(out.info["index"])
        thr = (1 - Fraction(1, k)) * chi_a - k * r
        return [(f"pow(sub({k}, count(X)), 2)", "<=", Fraction(k))] + [(f"chi(X{n})", ">=", thr)
                                                                      for n in range(1, m + 1)]
    nb = len(blocks_of(out))
    return [("pow(count(B), 2)", ">=", Fraction(k))] + [(f"chi(B{i})", ">=", Fraction(chi_a, k))
                                                         for i in range(1, nb + 1)]


def _input_sets(a_sets: List[int], bs: List[int], a_names: List[str]) -> Dict[str, int]:
    sets, full = {}, 0
    for name, m in zip(a_names, a_sets):
        sets[name] = m
        full |= m
    for n, m in enumerate(bs, 1):
        sets[f"in_B{n}"] = m
        full |= m
    sets["in_G"] = full
    return sets


def anticomplete_extract(g: Graph, a: int, bs: List[int], r, mode: str = "strict") -> Certificate:
    """Large subsets of A complete to most B_i, or a complete blockade inside A."""
    r = q(r)
    bs = list(bs)
    run = Run(g, "anticomplete_extract", {"r": r, "k": len(bs)}, mode, "B")
    _check_extract_inputs(run, [a], bs, [r])
    inputs = _input_sets([a], bs, ["in_A"])
    check_p5_free(g, inputs["in_G"])
    out = _extract(run, a, bs, r)
    return run.certificate(out, inputs, extract_claims(out, len(bs), run.chi(a), r))


def _averaged(run: Run, a_sets: List[int], bs: List[int], rs: List[Fraction]) -> Outcome:
    k = len(bs)
    found = []
    for j, (a, r) in enumerate(zip(a_sets, rs), 1):
        with run.nested():
            out = _extract(run, a, bs, r)
        if out.bullet == "complete_blockade":
            run.note("averaged", route="complete blockade inside one A", j=j)
            out.info["j"] = j
            return out
        pairs = {i: out.sets[f"X{n}"] for n, i in enumerate(out.info["index"], 1)}
        found.append(pairs)
    hits = [sum(1 for pairs in found if i in pairs) for i in range(1, k + 1)]
    best = max(range(1, k + 1), key=lambda i: (hits[i - 1], -i))
    members = [j for j, pairs in enumerate(found, 1) if best in pairs]
    run.note("averaged", route="pigeonhole index", i=best, members=members)
    sets = {"T": bs[best - 1]}
    for n, j in enumerate(members, 1):
        sets[f"P{n}"] = found[j - 1][best]
    return Outcome("complete_family", "complete_family", sets, {"i": best, "index": members})


def averaged_claims(out: Outcome, a_chis: List[int], k: int, rs: List[Fraction]):
    ell = len(a_chis)
    if out.bullet == "complete_family":
        claims = [(f"mul(pow(sub({ell}, count(P)), 2), {k})", "<=", Fraction(ell * ell))]
        for n, j in enumerate(out.info["index"], 1):
            claims.append((f"chi(P{n})", ">=", (1 - Fraction(1, k)) * a_chis[j - 1] - k * rs[j - 1]))
        return claims
    j = out.info["j"]
    nb = len(blocks_of(out))
    return [("pow(count(B), 2)", ">=", Fraction(k))] + [(f"chi(B{i})", ">=", Fraction(a_chis[j - 1], k))
                                                         for i in range(1, nb + 1)]


def averaged_extract(g: Graph, a_sets: List[int], bs: List[int], rs, mode: str = "strict") -> Certificate:
    """One B_i with most A_j holding a large part complete to it, or a complete blockade in some A_j."""
    a_sets, bs = list(a_sets), list(bs)
    rs = [q(r) for r in rs]
    require(len(rs) == len(a_sets), "need one r per A set", len(rs))
    run = Run(g, "averaged_extract", {"r": rs, "k": len(bs), "ell": len(a_sets)}, mode, "B")
    _check_extract_inputs(run, a_sets, bs, rs)
    inputs = _input_sets(a_sets, bs, [f"in_A{n}" for n in range(1, len(a_sets) + 1)])
    check_p5_free(g, inputs["in_G"])
    out = _averaged(run, a_sets, bs, rs)
    claims = averaged_claims(out, [run.chi(m) for m in a_sets], len(bs), rs)
    return run.certificate(out, inputs, claims)


# ---------------------------------------------------------------------------
# anticonnected pieces or a complete blockade


def _high_anticomponent(run: Run, s: int, y: Fraction) -> Optional[int]:
    """An anticomponent with chi >= y chi(S).  Every anticonnected subset of S
    lies inside one anticomponent, so this decides the hypothesis exactly."""
    chi_s = run.chi(s)
    for c in anticomponents(run.g, s):
        if run.chi(c) >= y * chi_s:
            return c
    return None


def _anticonn(run: Run, s: int, y: Fraction) -> Outcome:
    chi_s = run.chi(s)
    groups, cur = [], 0
    for c in anticomponents(run.g, s):
        cur |= c
        if run.chi(cur) >= y * chi_s:
            groups.append(cur)
            cur = 0
    run.note("anticonn", route="group anticomponents", k=len(groups))
    if len(groups) ** 2 * y < 1:
        run.fail("fewer than y^(-1/2) groups")
    return blockade_outcome("complete_blockade", groups, "complete")


def anticonn_claims(k: int, chi_s: int, y: Fraction):
    return [("pow(count(B), 2)", ">=", 1 / y)] + [(f"chi(B{i})", ">=", y * chi_s) for i in range(1, k + 1)]


def anticonn_or_complete(g: Graph, y, mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    """Complete blockade of length >= y^(-1/2) when no anticonnected set has chi >= y chi(G)."""
    y = in_range(q(y), Fraction(0), Fraction(1, 8), "y")
    s = _ground(g, ground)
    require(s != 0, "graph must be nonempty")
    run = Run(g, "anticonn_or_complete", {"y": y}, mode, "B")
    hi = _high_anticomponent(run, s, y)
    require(hi is None, "G[S] is anticonnected with chi(S) >= y chi(G)", None if hi is None else to_list(hi))
    out = _anticonn(run, s, y)
    return run.certificate(out, {"in_G": s}, anticonn_claims(len(blocks_of(out)), run.chi(s), y))


# ---------------------------------------------------------------------------
# second-round increment step


def _check_dense_blockade(run: Run, blocks: List[int], y: Fraction) -> None:
    seen = 0
    for n, m in enumerate(blocks, 1):
        require(m != 0 and m & seen == 0, "blocks must be disjoint and nonempty", n)
        seen |= m
    for j in range(len(blocks)):
        for i in range(j):
            ok, bad = run.orc.density_check(0, y, "to", a=blocks[i], b=blocks[j])
            require(ok, f"block {j + 1} is not (y,chi)-dense to block {i + 1}", bad)


def _clique_blockade(run: Run, blocks: List[int], y: Fraction, e: int) -> Optional[Outcome]:
    """A complete blockade of singletons inside some block: a clique with at
    least y^(-1/4) vertices, each meeting y^e chi(A_j)."""
    for j, m in enumerate(blocks, 1):
        cl = run.orc.clique(m)
        k = size(cl)
        if k ** 4 * y >= 1 and pow_at_least(1 / y, e, Fraction(run.chi(m))):
            out = blockade_outcome("complete_blockade", [1 << v for v in bits(cl)], "complete")
            out.info["j"] = j
            return out
    return None


def _transversal_from_vertex(run: Run, blocks: List[int], y: Fraction) -> Optional[Outcome]:
    """B_l a single vertex v of the last block, A'_j = A_j n N(v) for the blocks that keep
    (1 - 3 y^(1/2)) of their chromatic number."""
    g = run.g
    last = blocks[-1]
    ell = len(blocks)
    for v in bits(last):
        members, parts = [], []
        for j, m in enumerate(blocks[:-1], 1):
            part = m & g.nbrs(v)
            c, cp = run.chi(m), run.chi(part)
            if part and 9 * y * c * c >= (c - cp) ** 2 and cp <= c:
                members.append(j)
                parts.append(part)
        if members and (ell - len(members)) ** 4 <= 16 * y * ell ** 4:
            sets = {"T": 1 << v}
            for n, part in enumerate(parts, 1):
                sets[f"P{n}"] = part
            return Outcome("transversal", "complete_family", sets, {"index": members})
    return None


def _proof_route(run: Run, blocks: List[int], y: Fraction, b: int) -> Optional[Outcome]:
    """Midway inside the last block, then anticonnected pieces and averaging."""
    last = blocks[-1]
    eps = y ** b
    with run.nested():
        mid = _midway(run, last, eps, _exponent_from_b(b))
    ds = blocks_of(mid)
    if mid.bullet == "dense":
        out = blockade_outcome("dense_blockade", ds, "dense", eps)
        out.info["j"] = len(blocks)
        return out
    ds = [maximal_component(run, m) for m in ds]
    pieces = []
    for m in ds:
        hi = _high_anticomponent(run, m, y)
        if hi is None:
            with run.nested():
                inner = _anticonn(run, m, y)
            inner.info["j"] = len(blocks)
            return inner
        pieces.append(hi)
    k = 1
    while k * k * y < 1:
        k += 1
    if k > len(pieces):
        run.fail("fewer anticonnected pieces than ceil(y^(-1/2))")
    rest = blocks[:-1]
    with run.nested():
        avg = _averaged(run, rest, pieces[:k], [y * run.chi(m) for m in rest])
    if avg.bullet == "complete_blockade":
        return avg
    sets = {"T": avg.sets["T"]}
    sets.update({n: m for n, m in avg.sets.items() if n.startswith("P")})
    return Outcome("transversal", "complete_family", sets, {"index": avg.info["index"]})


def _incre2_step(run: Run, blocks: List[int], y: Fraction, b: int) -> Outcome:
    last = blocks[-1]
    if size(last) * y ** b >= 1:
        out = _proof_route(run, blocks, y, b)
        if out is not None:
            return out
    run.note("incre2_step", route="midway needs y^-b blocks inside the last block; direct witnesses",
             size=size(last))
    out = _clique_blockade(run, blocks, y, b * b + 1)
    if out is not None:
        run.note("incre2_step", route="clique inside a block", j=out.info["j"])
        return out
    out = _transversal_from_vertex(run, blocks, y)
    if out is not None:
        run.note("incre2_step", route="one vertex of the last block", v=least(out.sets["T"]))
        return out
    run.fail("no outcome found")


def incre2_claims(out: Outcome, block_chis: List[int], y: Fraction, b: int):
    ell = len(block_chis)
    if out.bullet == "dense_blockade":
        k = len(blocks_of(out))
        return [("count(B)", ">=", (1 / y) ** b)] + [power_claim(f"B{i}", 1 / y, b * b, Fraction(block_chis[-1]))
                                                      for i in range(1, k + 1)]
    if out.bullet == "transversal":
        claims = [power_claim("T", 1 / y, b * b + 1, Fraction(block_chis[-1])),
                  (f"pow(sub({ell}, count(P)), 4)", "<=", 16 * y * ell ** 4)]
        for n, j in enumerate(out.info["index"], 1):
            c = block_chis[j - 1]
            claims.append((f"pow(sub({c}, chi(P{n})), 2)", "<=", 9 * y * c * c))
        return claims
    j = out.info["j"]
    k = len(blocks_of(out))
    return [("pow(count(B), 4)", ">=", 1 / y)] + [power_claim(f"B{i}", 1 / y, b * b + 1, Fraction(block_chis[j - 1]))
                                                  for i in range(1, k + 1)]


def _incre2_b(b, relaxed: bool) -> int:
    if relaxed:
        b = _int_param(RELAXED_B if b is None else b, "b", 6)
        _exponent_from_b(b)
        return b
    require(b is None or q(b) == B_MID, f"strict mode uses b = {B_MID}", b)
    return B_MID


def incre2_step(g: Graph, blocks: List[int], y, b=None, mode: str = "strict") -> Certificate:
    """Increment on a (y,chi)-dense blockade: denser blockade, complete transversal, or complete blockade."""
    y = in_range(q(y), Fraction(0), INCRE2_Y_MAX, "y")
    blocks = list(blocks)
    run = Run(g, "incre2_step", {"y": y}, mode, "C")
    b = _incre2_b(b, run.relaxed)
    run.builder.params["b"] = b
    require(len(blocks) >= 2 and len(blocks) ** 4 * y >= 1, "need at least max(2, y^(-1/4)) blocks", len(blocks))
    _check_dense_blockade(run, blocks, y)
    run.gate(pow_at_most(1 / y, b * b, Fraction(run.chi(blocks[-1]))), "chi(A_l) >= y^(-b^2)")
    full = 0
    inputs = {}
    for n, m in enumerate(blocks, 1):
        inputs[f"in_A{n}"] = m
        full |= m
    inputs["in_G"] = full
    check_p5_free(g, full)
    out = _incre2_step(run, blocks, y, b)
    return run.certificate(out, inputs, incre2_claims(out, [run.chi(m) for m in blocks], y, b))


# ---------------------------------------------------------------------------
# second round driver


def _incre2_iterate(run: Run, blocks: List[int], y: Fraction, b: int) -> Outcome:
    """Grow a complete transversal J while the remaining blocks stay dense.

    Returns a 'dense_blockade' inside one block (density y^(2b/3)), a
    'complete_blockade' transversal, or a 'complete_blockade' inside one block.
    """
    chosen: Dict[int, int] = {}
    live = list(range(len(blocks)))
    cur = list(blocks)
    while True:
        if len(chosen) ** 8 * y >= 1:
            run.note("incre2_iterate", route="transversal is long", size=len(chosen))
            return blockade_outcome("complete_blockade", [chosen[j] for j in sorted(chosen)], "complete")
        if len(live) < 2:
            run.fail("fewer than two live blocks remain")
        with run.nested():
            out = _incre2_step(run, [cur[i] for i in live], 2 * y, b)
        if out.bullet == "dense_blockade":
            return blockade_outcome("dense_blockade", blocks_of(out), "dense", y ** (2 * b // 3))
        if out.bullet == "complete_blockade":
            return out
        top = live[-1]
        chosen[top] = out.sets["T"]
        keep = [live[j - 1] for j in out.info["index"]]
        for n, i in enumerate(keep, 1):
            cur[i] = out.sets[f"P{n}"]
        live = keep
        run.note("incre2_iterate", route="extend transversal", block=top + 1, live=len(live))


def _endgame(run: Run, blocks: List[int]) -> List[int]:
    """Longest clique v_(p+1), ..., v_l with v_i in A_i, as singleton blocks B_i = {v_(l+1-i)}."""
    g = run.g
    ell = len(blocks)
    best: List[int] = []

    def grow(i: int, common: int, path: List[int]) -> None:
        nonlocal best
        if len(path) > len(best):
            best = list(path)
        if i < 0 or len(path) + i + 1 <= len(best):
            return
        for v in bits(blocks[i] & common):
            path.append(v)
            grow(i - 1, common & g.nbrs(v), path)
            path.pop()

    grow(ell - 1, g.full, [])
    return [1 << v for v in best]


def _round2(run: Run, s: int, eps: Fraction, b: int) -> Outcome:
    chi_s = run.chi(s)
    qn = floor_sqrt_q(1 / eps) // 2
    require(qn >= 2, "eps too large for a partition into two or more parts", eps)
    if chi_s < 2 * qn:
        run.gate(False, "chi(G) >= 2q for the equal-chi partition")
        qn = chi_s // 2
    parts = equal_chi_partition(run, s, qn) if qn >= 2 else None
    if parts is None:
        run.gate(False, "equal-chi partition available")
        parts = [1 << v for v in bits(s)]
        y = Fraction(1)
        run.note("round2", route="singleton blocks")
    else:
        y = 2 * qn * eps
        run.note("round2", route="equal-chi partition", q=qn)
    while True:
        ell = len(parts)
        usable = (y <= ITERATE2_Y_MAX and ell ** 4 * y >= 8 ** 4
                  and all(pow_at_least(1 / y, 6 * b, Fraction(chi_s, run.chi(m))) for m in parts)
                  and pow_at_most(1 / y, 2 * b * b, Fraction(chi_s) ** 3))
        if not usable:
            run.note("round2", route="iterate not applicable; clique endgame", y=y, ell=ell)
            break
        with run.nested():
            it = _incre2_iterate(run, parts, y, b)
        if it.bullet == "dense_blockade":
            parts, y = blocks_of(it), y ** (2 * b // 3)
            run.note("round2", route="denser blockade", y=y)
            continue
        return it
    blocks = _endgame(run, parts)
    run.note("round2", route="clique transversal", k=len(blocks))
    return blockade_outcome("complete_blockade", blocks, "complete")


def round2_claims(k: int, chi_s: int, eps: Fraction, a: int):
    return [("pow(count(B), 16)", ">=", 1 / eps)] + [power_claim(f"B{i}", Fraction(k), a, Fraction(chi_s))
                                                     for i in range(1, k + 1)]


def _check_round2_out(run: Run, out: Outcome, chi_s: int, eps: Fraction, a: int) -> None:
    blocks = blocks_of(out)
    k = len(blocks)
    if k < 2 or k ** 16 * eps < 1:
        run.fail(f"complete blockade of length {k} is shorter than eps^(-1/16)")
    for m in blocks:
        if not pow_at_least(Fraction(k), a, Fraction(chi_s, run.chi(m))):
            run.fail("block below k^-a chi(G)")


def round2(g: Graph, eps, mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    """Complete blockade with k >= eps^(-1/16) and blocks >= k^-a chi(G) in an (eps,chi)-dense graph."""
    eps = q(eps)
    s = _ground(g, ground)
    run = Run(g, "round2", {"eps": eps, "a": A2}, mode, "C")
    in_range(eps, Fraction(0), ROUND2_RELAXED_EPS_MAX if run.relaxed else ROUND2_EPS_MAX, "eps")
    require(s != 0, "graph must be nonempty")
    ok, bad = run.orc.density_check(s, eps, "self")
    require(ok, "G must be (eps,chi)-dense", bad)
    chi_s = run.chi(s)
    run.gate(pow_at_most(1 / eps, A2, Fraction(chi_s)), "chi(G) >= eps^-a")
    check_p5_free(g, s)
    out = _round2(run, s, eps, B_MID)
    _check_round2_out(run, out, chi_s, eps, A2)
    return run.certificate(out, {"in_G": s}, round2_claims(len(blocks_of(out)), chi_s, eps, A2))


# ---------------------------------------------------------------------------
# main trichotomy


def _main(run: Run, s: int) -> Outcome:
    chi_s = run.chi(s)
    with run.nested():
        first = _anti_or_dense(run, s, A2 + 3, MAIN_C)
    if first.bullet == "complete_balanced":
        run.note("main", route="balanced complete pair as a blockade of length 2")
        return blockade_outcome("complete_blockade", [first.sets["X"], first.sets["Y"]], "complete")
    if first.bullet == "complete_unbalanced":
        run.note("main", route="unbalanced complete pair")
        return Outcome("complete_pair", "complete_pair", {"X": first.sets["X"], "Y": first.sets["Y"]},
                       {"y": first.info["y"]})
    f, eps = first.sets["F"], first.info["density"]
    run.note("main", route="dense subgraph; second round", F=to_list(f), eps=eps)
    with run.nested():
        out = _round2(run, f, eps, B_MID)
    blocks = blocks_of(out)
    k = len(blocks)
    if k < 2 or not all(pow_at_least(Fraction(k), D, Fraction(chi_s, run.chi(m))) for m in blocks):
        run.fail("second round blockade misses k >= 2 or k^-d chi(G)")
    return out


def main_claims(out: Outcome, chi_s: int):
    if out.bullet == "complete_pair":
        y = out.info["y"]
        return [power_claim("X", 1 / y, D, Fraction(chi_s)), ("chi(Y)", ">=", (1 - y) * chi_s)]
    k = len(blocks_of(out))
    return [("count(B)", ">=", Fraction(2))] + [power_claim(f"B{i}", Fraction(k), D, Fraction(chi_s))
                                                for i in range(1, k + 1)]


def main_trichotomy(g: Graph, mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    """Complete pair (X, Y) with chi(X) >= y^d chi(G), chi(Y) >= (1-y) chi(G), or a complete
    blockade of length k >= 2 with blocks >= k^-d chi(G)."""
    s = _ground(g, ground)
    require(s != 0, "graph must be nonempty")
    run = Run(g, "main_trichotomy", {"d": D}, mode, "C")
    chi_s = run.chi(s)
    run.gate(pow_at_most(Fraction(2), D, Fraction(chi_s)), "chi(G) >= 2^d")
    require(chi_s >= 2, "chi(G) must be at least 2", chi_s)
    check_p5_free(g, s)
    out = _main(run, s)
    return run.certificate(out, {"in_G": s}, main_claims(out, chi_s))


__all__ = [
    "anticomplete_extract", "anticonn_or_complete", "averaged_extract", "convert_blockade", "default_supplier",
    "incre2_step", "main_trichotomy", "midway_blockade", "pattern_graph", "round2",
]
