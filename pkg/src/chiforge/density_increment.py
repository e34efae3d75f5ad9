"""First round of chromatic density increment.

Averaging over a vertex's nonneighbourhood, greedy anticovering, the
one-step increment and the driver that returns a pure or (x,chi)-dense
blockade.  Every public operation returns a :class:`Certificate`; the
``_name`` counterparts return an :class:`Outcome` for nested use.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .certificate import Certificate, Evaluator, pow_at_most, power_claim, relation_holds
from .chi_oracles import P5Found
from .exact import ceil_log2, ceil_sqrt_q, q
from .graph_core import Graph, PairKind, bits, classify_pair, find_induced_p5, size, to_list
from .ledger import A1
from .procedure import (Outcome, Run, block_claims, blockade_outcome, blocks_of,
                        check_p5_free, equal_chi_partition, in_range, maximal_component, require, root_of)
from .structure_lemmas import _pure_or_dense

HALF = Fraction(1, 2)
Y_MAX = Fraction(1, 2 ** 8)
ITERATE_Y_MAX = Fraction(1, 2 ** 12)
ROUND1_EPS = Fraction(1, 2 ** 32)
ROUND1_DELTA = Fraction(1, 2 ** 71)


def _ground(g: Graph, ground: Optional[int]) -> int:
    s = g.full if ground is None else ground
    g.check_set(s)
    return s


def _dense_pair(x: int, y: int, density: Fraction, bullet: str = "dense_pair") -> Outcome:
    return Outcome(bullet, "dense_to_pair", {"X": x, "Y": y}, {"density": density})


def _check_vab(g: Graph, v: int, a: int, b: int) -> None:
    require(0 <= v < g.n, "v must be a vertex", v)
    require(a != 0 and b != 0, "A and B must be nonempty")
    require(a & ~g.nbrs(v) == 0, "A must lie in N(v)", to_list(a & ~g.nbrs(v)))
    require(b & g.closed(v) == 0, "B must avoid N[v]", to_list(b & g.closed(v)))


def _pure_check(run: Run, blocks: List[int], within: int) -> None:
    """The proof derives purity from P5-freeness; a mixed pair means a P5."""
    for j in range(len(blocks)):
        for i in range(j):
            if classify_pair(run.g, blocks[i], blocks[j]) is PairKind.MIXED:
                w = find_induced_p5(run.g, within)
                if w is None:
                    raise AssertionError("mixed blockade pair without an induced P5")
                raise P5Found(w)


def _count_claims(k_lo_sq: Optional[Fraction] = None, k_lo: Optional[Fraction] = None,
                  k_hi: Optional[Fraction] = None):
    out = []
    if k_lo_sq is not None:
        out.append(("pow(count(B), 2)", ">=", Fraction(k_lo_sq)))
    if k_lo is not None:
        out.append(("count(B)", ">=", Fraction(k_lo)))
    if k_hi is not None:
        out.append(("count(B)", "<=", Fraction(k_hi)))
    return out


# ---------------------------------------------------------------------------
# averaging over nonneighbourhoods


def _avgalt(run: Run, a: int, b: int, y: Fraction) -> Tuple[str, int, int]:
    """('dense', X, Y) with X (y,chi)-dense to Y, or ('split', D, E).

    In the split case D is every vertex of A with no neighbour in E, and
    y^2 chi(B) <= chi(E) <= y chi(B).
    """
    g = run.g
    chi_b = run.chi(b)
    witness = None
    for u in bits(a):
        if run.chi(b & ~g.nbrs(u)) >= y * chi_b:
            witness = u
            break
    if witness is None:
        return "dense", a, b
    d, e = 1 << witness, b & ~g.nbrs(witness)
    floor_ = y * y * chi_b
    changed = True
    while changed:
        changed = False
        for w in bits(a & ~d):
            if run.chi(e & ~g.nbrs(w)) >= floor_:
                d |= 1 << w
                e &= ~g.nbrs(w)
                changed = True
                break
    if run.chi(e) > y * chi_b:
        return "dense", a & ~d, e
    full_d = 0
    for w in bits(a):
        if not g.nbrs(w) & e:
            full_d |= 1 << w
    return "split", full_d, e


def _avg_p5(run: Run, v: int, a: int, b: int, r: Fraction, y: Fraction, qn: int) -> Outcome:
    chi_a, chi_b = run.chi(a), run.chi(b)
    ds: List[int] = []
    es: List[int] = []
    a_left, b_left = a, b
    while len(es) < qn:
        require(a_left != 0 and b_left != 0, "averaging ran out of vertices")
        how, p, s = _avgalt(run, a_left, b_left, y)
        if how == "dense":
            if p and run.chi(p) >= chi_a - qn * r and run.chi(s) >= HALF * y * chi_b:
                run.note("avg_p5", route="dense pair", round=len(es), X=to_list(p), Y=to_list(s))
                return _dense_pair(p, s, y)
            if not p and chi_a - qn * r <= 0 and run.chi(s) >= HALF * y * chi_b:
                # chi(A) = q r exactly: the first bullet holds with X empty
                run.note("avg_p5", route="vacuous pair", round=len(es), Y=to_list(s))
                return _dense_pair(0, s, y, "vacuous_pair")
            run.fail(f"averaging step {len(es)} gave a dense pair below its thresholds")
        if not (HALF * y * y * chi_b <= run.chi(s) <= y * chi_b):
            run.fail(f"averaging step {len(es)} gave E outside [y^2/2, y] chi(B)")
        run.note("avg_p5", route="split", round=len(es), D=to_list(p), E=to_list(s))
        ds.append(p)
        es.append(s)
        a_left &= ~p
        b_left &= ~s
    blocks = [maximal_component(run, e) for e in es]
    _pure_check(run, blocks, a | b | (1 << v))
    run.note("avg_p5", route="pure blockade from maximal components", k=len(blocks))
    return blockade_outcome("pure_blockade", blocks, "pure")


def _check_avg_inputs(run: Run, v: int, a: int, b: int, r: Fraction, y: Fraction, qn: int) -> None:
    g = run.g
    in_range(y, Fraction(0), HALF, "y")
    require(r > 0, "r must be positive", r)
    require(qn >= 1 and 2 * qn * y <= 1, "q must satisfy 1 <= q <= 1/(2y)", qn)
    _check_vab(g, v, a, b)
    require(run.chi(a) >= qn * r, "chi(A) must be at least q*r", run.chi(a))
    for u in bits(b):
        require(run.chi(a & ~g.nbrs(u)) <= r, "chi(A minus N(u)) must be at most r for u in B", u)


def avg_p5(g: Graph, v: int, a: int, b: int, r, y, qn: int, mode: str = "strict") -> Certificate:
    """Dense pair (X, Y) or a pure blockade of length q inside B."""
    r, y = q(r), q(y)
    run = Run(g, "avg_p5", {"v": v, "r": r, "y": y, "q": qn}, mode, "B")
    _check_avg_inputs(run, v, a, b, r, y, qn)
    check_p5_free(g, a | b | (1 << v))
    out = _avg_p5(run, v, a, b, r, y, qn)
    chi_a, chi_b = run.chi(a), run.chi(b)
    if out.bullet in ("dense_pair", "vacuous_pair"):
        claims = [("chi(X)", ">=", chi_a - qn * r), ("chi(Y)", ">=", HALF * y * chi_b)]
    else:
        claims = _count_claims(k_lo=Fraction(qn)) + block_claims(qn, HALF * y * y * chi_b)
    return run.certificate(out, {"in_G": a | b | (1 << v), "in_A": a, "in_B": b}, claims)


# ---------------------------------------------------------------------------
# greedy anticovering


def bucket_count(x: Fraction, y: Fraction) -> int:
    """ceil(log2(1/x) - log2(1/y)/2), computed as ceil(ceil(log2(y/x^2)) / 2)."""
    t = ceil_log2(y / (x * x))
    return max(1, -(-t // 2))


def _dense_shrink(run: Run, v: int, a: int, b: int, x: Fraction, y: Fraction) -> Outcome:
    g = run.g
    chi_b = run.chi(b)
    order: List[int] = []
    es: List[int] = []
    common = b
    left = a
    while left:
        best, best_chi = -1, -1
        for u in bits(left):
            c = run.chi(common & ~g.nbrs(u))
            if c > best_chi:
                best, best_chi = u, c
        order.append(best)
        es.append(common & ~g.nbrs(best))
        common &= g.nbrs(best)
        left &= ~(1 << best)
    run.note("dense_shrink", route="greedy ordering", order=order)
    floor_ = x * x * chi_b
    ell = 0
    while ell < len(es) and run.chi(es[ell]) >= floor_:
        ell += 1
    if ell == 0:
        run.note("dense_shrink", route="E1 below x^2 chi(B)")
        return _dense_pair(a, b, x)
    blocks = [maximal_component(run, e) for e in es[:ell]]
    _pure_check(run, blocks, a | b | (1 << v))
    nb = bucket_count(x, y)
    buckets: List[List[int]] = [[] for _ in range(nb)]
    for j, blk in enumerate(blocks):
        c = run.chi(blk)
        for p in range(1, nb + 1):
            if c <= 4 ** p * floor_:
                buckets[p - 1].append(j)
                break
    for p, members in enumerate(buckets, 1):
        cap = Fraction(2 ** (1 - p)) / x
        if len(members) > cap:
            k = -(-cap.numerator // cap.denominator)
            k = max(k, 1)
            chosen = [blocks[j] for j in members[:k]]
            if k * k * y >= 1 and k * k * x * x <= 1 and all(k * k * run.chi(c) >= chi_b for c in chosen):
                run.note("dense_shrink", route="crowded bucket", bucket=p, k=k)
                return blockade_outcome("pure_blockade", chosen, "pure")
    x_set = a
    for u in order[:ell]:
        x_set &= ~(1 << u)
    y_set = b
    for e in es[:ell]:
        y_set &= ~e
    if x_set and y_set and 2 * run.chi(y_set) >= chi_b and run.chi(x_set) >= run.chi(a) - 2 / x:
        run.note("dense_shrink", route="trimmed pair", ell=ell)
        return _dense_pair(x_set, y_set, x)
    run.fail("trimmed pair misses its thresholds and no bucket is crowded")


def _check_shrink_inputs(run: Run, v: int, a: int, b: int, x: Fraction, y: Fraction) -> None:
    in_range(x, Fraction(0), Y_MAX, "x")
    in_range(y, Fraction(0), Y_MAX, "y")
    require(x <= y, "x must not exceed y", (x, y))
    _check_vab(run.g, v, a, b)
    ok, bad = run.orc.density_check(0, y, "to", a=b, b=a)
    require(ok, "A must be (y,chi)-dense to B", bad)


def dense_shrink(g: Graph, v: int, a: int, b: int, x, y, mode: str = "strict") -> Certificate:
    """(x,chi)-dense pair or a pure blockade inside B."""
    x, y = q(x), q(y)
    run = Run(g, "dense_shrink", {"v": v, "x": x, "y": y}, mode, "B")
    _check_shrink_inputs(run, v, a, b, x, y)
    run.gate(run.chi(a) >= 2 / x, "chi(A) >= 2/x")
    check_p5_free(g, a | b | (1 << v))
    out = _dense_shrink(run, v, a, b, x, y)
    chi_a, chi_b = run.chi(a), run.chi(b)
    if out.bullet == "dense_pair":
        claims = [("chi(X)", ">=", chi_a - 2 / x), ("chi(Y)", ">=", HALF * chi_b)]
    else:
        k = len(blocks_of(out))
        claims = _count_claims(k_lo_sq=1 / y, k_hi=1 / (x * x)) + block_claims(k, Fraction(chi_b, k * k))
    return run.certificate(out, {"in_G": a | b | (1 << v), "in_A": a, "in_B": b}, claims)


def combine_q(y: Fraction) -> int:
    return ceil_sqrt_q(1 / y)


def _combine_gate(chi_a: int, r: Fraction, x: Fraction, y: Fraction) -> bool:
    """chi(A) >= 2 y^(-1/2) r + 2/x, exactly."""
    t = chi_a - 2 / x
    return t >= 0 and t * t * y >= 4 * r * r


def _dense_combine(run: Run, v: int, a: int, b: int, r: Fraction, x: Fraction, y: Fraction) -> Outcome:
    qn = combine_q(y)
    if run.chi(a) < qn * r:
        # implied by the magnitude gate, so only reachable after a relaxed waiver
        run.fail("chi(A) >= q*r is needed for the averaging step")
    with run.nested():
        first = _avg_p5(run, v, a, b, r, y, qn)
    if first.bullet == "pure_blockade":
        run.note("dense_combine", route="averaging gave a pure blockade", k=qn)
        return first
    p, qs = first.sets["X"], first.sets["Y"]
    with run.nested():
        second = _dense_shrink(run, v, p, qs, x, y)
    run.note("dense_combine", route=f"anticovering gave {second.bullet}")
    return second


def _check_combine_inputs(run: Run, v: int, a: int, b: int, r: Fraction, x: Fraction, y: Fraction) -> None:
    g = run.g
    in_range(x, Fraction(0), Y_MAX, "x")
    in_range(y, Fraction(0), Y_MAX, "y")
    require(x <= y, "x must not exceed y", (x, y))
    require(r > 0, "r must be positive", r)
    _check_vab(g, v, a, b)
    for u in bits(b):
        require(run.chi(a & ~g.nbrs(u)) <= r, "chi(A minus N(u)) must be at most r for u in B", u)


def combine_claims(bullet: str, k: int, chi_a: int, chi_b: int, r: Fraction, x: Fraction, y: Fraction):
    if bullet == "dense_pair":
        return [("chi(X)", ">=", chi_a - combine_q(y) * r - 2 / x), ("chi(Y)", ">=", y * y * chi_b / 4)]
    return _count_claims(k_lo_sq=1 / y, k_hi=1 / (x * x)) + [power_claim(f"B{i}", Fraction(k), 7, Fraction(chi_b))
                                                               for i in range(1, k + 1)]


def dense_combine(g: Graph, v: int, a: int, b: int, r, x, y, mode: str = "strict") -> Certificate:
    """Averaging followed by anticovering: an (x,chi)-dense pair or a pure blockade."""
    r, x, y = q(r), q(x), q(y)
    run = Run(g, "dense_combine", {"v": v, "r": r, "x": x, "y": y}, mode, "B")
    _check_combine_inputs(run, v, a, b, r, x, y)
    run.gate(_combine_gate(run.chi(a), r, x, y), "chi(A) >= 2 y^(-1/2) r + 2/x")
    check_p5_free(g, a | b | (1 << v))
    out = _dense_combine(run, v, a, b, r, x, y)
    k = len(blocks_of(out))
    claims = combine_claims(out.bullet, k, run.chi(a), run.chi(b), r, x, y)
    return run.certificate(out, {"in_G": a | b | (1 << v), "in_A": a, "in_B": b}, claims)


# ---------------------------------------------------------------------------
# one increment step and its iterate


def incre1_claims(bullet: str, k: int, chi_s: int, x: Fraction, y: Fraction):
    if bullet == "denser":
        return [("chi(F)", ">=", Fraction(chi_s))]
    if bullet == "dense_pair":
        ry = root_of(y, 2, "y")
        return [("chi(X)", ">=", (1 - 3 * ry) * chi_s), ("chi(Y)", ">=", y ** 4 * chi_s / 4)]
    return _count_claims(k_lo_sq=1 / y, k_hi=1 / (x * x)) + [power_claim(f"B{i}", Fraction(k), 11, Fraction(chi_s))
                                                               for i in range(1, k + 1)]


def _incre1_step(run: Run, s: int, x: Fraction, y: Fraction) -> Outcome:
    g = run.g
    chi_s = run.chi(s)
    ok, v = run.orc.density_check(s, y * y, "self")
    if ok:
        run.note("incre1_step", route="already (y^2,chi)-dense")
        return Outcome("denser", "dense_subgraph", {"F": s}, {"density": y * y})
    a, b = g.nbrs(v) & s, s & ~g.closed(v)
    r = y * chi_s
    run.note("incre1_step", route="vertex with a large nonneighbourhood", v=v)
    if not a:
        run.fail("the violating vertex has no neighbours")
    with run.nested():
        out = _dense_combine(run, v, a, b, r, x, y)
    k = len(blocks_of(out))
    claims = incre1_claims(out.bullet, k, chi_s, x, y)
    if not _meets_claims(run, out, claims):
        run.fail(f"combined outcome {out.bullet} misses the step thresholds")
    return out


def _meets_claims(run: Run, out: Outcome, claims) -> bool:
    ev = Evaluator(run.g, out.sets, run.orc)
    return all(relation_holds(ev(m), rel, Fraction(rhs)) for m, rel, rhs in claims)


def _check_incre1_inputs(run: Run, s: int, x: Fraction, y: Fraction) -> None:
    in_range(x, Fraction(0), Y_MAX, "x")
    in_range(y, Fraction(0), Y_MAX, "y")
    require(x <= y, "x must not exceed y", (x, y))
    root_of(y, 2, "y")
    require(s != 0, "graph must be nonempty")
    ok, bad = run.orc.density_check(s, y, "self")
    require(ok, "G must be (y,chi)-dense", bad)


def incre1_step(g: Graph, x, y, mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    """(y^2,chi)-dense already, an (x,chi)-dense pair, or a pure blockade."""
    x, y = q(x), q(y)
    s = _ground(g, ground)
    run = Run(g, "incre1_step", {"x": x, "y": y}, mode, "B")
    _check_incre1_inputs(run, s, x, y)
    chi_s = run.chi(s)
    run.gate(pow_at_most(1 / x, 2, Fraction(chi_s)), "chi(G) >= x^-2")
    check_p5_free(g, s)
    out = _incre1_step(run, s, x, y)
    claims = incre1_claims(out.bullet, len(blocks_of(out)), chi_s, x, y)
    return run.certificate(out, {"in_G": s}, claims)


def _incre1_iterate(run: Run, s: int, x: Fraction, y: Fraction) -> Outcome:
    """Repeat the increment step on the last block of a growing dense blockade.

    Returns 'denser' (F with (y^(3/2),chi)-density), 'dense_blockade' of
    length >= y^(-1/4), or 'pure_blockade'.
    """
    chi_s = run.chi(s)
    ry = root_of(y, 2, "y")
    blocks: List[int] = []
    last = s
    while True:
        if len(blocks) ** 4 * y >= 1:
            run.note("incre1_iterate", route="long dense blockade", ell=len(blocks))
            return blockade_outcome("dense_blockade", list(blocks), "dense", x)
        if 4 * run.chi(last) < chi_s:
            run.fail("last block fell below a quarter of chi(G)")
        with run.nested():
            out = _incre1_step(run, last, x, 4 * y)
        if out.bullet == "denser":
            run.note("incre1_iterate", route="last block is denser", ell=len(blocks))
            return Outcome("denser", "dense_subgraph", {"F": last}, {"density": 16 * y * y})
        if out.bullet == "pure_blockade":
            run.note("incre1_iterate", route="pure blockade inside the last block")
            return out
        xs, ys = out.sets["X"], out.sets["Y"]
        if run.chi(ys) < y ** 4 * chi_s or run.chi(xs) < (1 - 6 * ry) ** (len(blocks) + 1) * chi_s:
            run.fail("increment step pair misses the iterate thresholds")
        blocks.append(ys)
        last = xs


# ---------------------------------------------------------------------------
# round one driver


def _y_candidates(x: Fraction, relaxed: bool) -> Tuple[List[Fraction], bool]:
    """Finite family searched for the minimal y, and whether the range was waived."""
    lo, hi = x ** 3, ROUND1_EPS
    if lo > hi:
        if relaxed:
            return [lo], True
        return [], False
    out = {lo}
    j = 8
    while Fraction(1, 2 ** (4 * j)) >= lo:
        out.add(Fraction(1, 2 ** (4 * j)))
        j += 1
    return sorted(out), False


def _round1_pair_fallback(run: Run, s: int) -> Outcome:
    u, w = list(bits(s))[:2]
    run.note("fallback", route="two vertices form a pure pair", X=[u], Y=[w])
    return blockade_outcome("pure_pair", [1 << u, 1 << w], "pure")


def _round1(run: Run, s: int, x: Fraction) -> Outcome:
    chi_s = run.chi(s)
    with run.nested():
        first = _pure_or_dense(run, s, ROUND1_EPS, ROUND1_DELTA)
    if first.bullet == "pure":
        run.note("round1", route="pure pair from the pure-or-dense step")
        return blockade_outcome("pure_pair", [first.sets["X"], first.sets["Y"]], "pure")
    f0 = first.sets["F"]
    cands, waived = _y_candidates(x, run.relaxed)
    if waived:
        run.builder.waive("y range [x^3, 2^-32] is empty; y = x^3")
    clique = run.orc.clique(s)
    chosen = None
    for y in cands:
        for f in (f0, clique):
            if f and run.chi(f) >= y ** 3 * chi_s and run.orc.is_dense(f, y):
                chosen = (y, f)
                break
        if chosen:
            break
    if chosen is None:
        run.fail("no candidate y admits a dense subgraph")
    y, f = chosen
    run.note("round1", route="minimal y", y=y, F=to_list(f))
    while y > x * x:
        with run.nested():
            it = _incre1_iterate(run, f, x * x, y)
        if it.bullet == "denser":
            lower = [c for c in cands if c < y]
            if not lower:
                run.fail("denser subgraph below the candidate family")
            y, f = lower[-1], it.sets["F"]
            run.note("round1", route="descend", y=y, F=to_list(f))
            continue
        blocks = blocks_of(it)
        if it.bullet == "dense_blockade":
            ell = 1
            while ell ** 4 * y < 1:
                ell += 1
            run.note("round1", route="dense blockade from the iterate", k=ell)
            return blockade_outcome("dense_blockade", blocks[:ell], "dense", x)
        k = len(blocks)
        qn = 1
        while (qn + 1) ** 4 <= k:
            qn += 1
        run.note("round1", route="pure blockade from the iterate", k=qn)
        return blockade_outcome("pure_blockade", blocks[:qn], "pure")
    ell = ceil_sqrt_q(1 / x)
    parts = equal_chi_partition(run, f, ell)
    if parts is not None and ell >= 2:
        run.note("round1", route="equal-chi partition of F", ell=ell)
        return blockade_outcome("dense_blockade", parts, "dense", x)
    if size(s) >= 2 and power_ok(2, chi_s):
        return _round1_pair_fallback(run, s)
    run.fail("F is too small to split and no pure pair is available")


def power_ok(k: int, chi_s: int) -> bool:
    """A single vertex meets k^-a1 chi(G)."""
    return pow_at_most(Fraction(1, k), A1, Fraction(1, chi_s))


def round1_claims(k: int, chi_s: int, x: Fraction):
    return _count_claims(k_lo=Fraction(2), k_hi=1 / x) + [power_claim(f"B{i}", Fraction(k), A1, Fraction(chi_s))
                                                          for i in range(1, k + 1)]


def check_round1_x(x: Fraction, relaxed: bool) -> None:
    if relaxed:
        require(0 < x < HALF, "x must lie in (0, 1/2) in relaxed mode", x)
    else:
        in_range(x, Fraction(0), Fraction(1, 2 ** A1), "x")


def round1(g: Graph, x, mode: str = "strict", ground: Optional[int] = None) -> Certificate:
    """Pure or (x,chi)-dense blockade with 2 <= k <= 1/x and blocks >= k^-200 chi(G)."""
    x = q(x)
    s = _ground(g, ground)
    run = Run(g, "round1", {"x": x, "a": A1}, mode, "C")
    check_round1_x(x, run.relaxed)
    require(size(s) >= 2, "graph needs two vertices")
    chi_s = run.chi(s)
    run.gate(pow_at_most(1 / x, A1, Fraction(chi_s)), f"chi(G) >= x^-{A1}")
    check_p5_free(g, s)
    out = _round1(run, s, x)
    k = len(blocks_of(out))
    if not 2 <= k <= 1 / x:
        run.fail(f"blockade length {k} outside [2, 1/x]")
    return run.certificate(out, {"in_G": s}, round1_claims(k, chi_s, x))


__all__ = [
    "avg_p5", "bucket_count", "combine_q", "dense_combine", "dense_shrink", "incre1_step", "round1",
]
