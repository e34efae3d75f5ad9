"""Shared machinery for the constructive procedures.

Every procedure works on the full input graph G together with a ``ground``
mask S and reasons about G[S].  Keeping one graph lets all nested calls share
one exact oracle cache and keeps every output set in G's own vertex labels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from .certificate import CertBuilder, Certificate
from .chi_oracles import Oracle, P5Found, oracle_for
from .exact import exact_root, q
from .graph_core import (Graph, bits, classify_pair, components, find_induced_p5, least,
                         to_list, PairKind)

MODES = ("strict", "relaxed")


class PreconditionError(ValueError):
    """An input violates a hypothesis; names the clause and a witness."""

    def __init__(self, clause: str, witness: Any = None):
        msg = clause if witness is None else f"{clause} (witness: {witness})"
        super().__init__(msg)
        self.clause = clause
        self.witness = witness


class GateError(PreconditionError):
    """A magnitude hypothesis (chi large enough) fails in strict mode."""


class SparsityFailure(PreconditionError):
    """No sparse pair exists where the decomposition needs one."""

    def __init__(self, clause: str, region: int):
        super().__init__(clause, to_list(region))
        self.region = region


class LemmaFailure(RuntimeError):
    """Every route of a construction failed on a valid input.

    This is a counterexample candidate, never a silent fallback.
    """

    def __init__(self, lemma: str, reason: str, graph6: str = "", params: Optional[Dict[str, Any]] = None):
        super().__init__(f"{lemma}: {reason}")
        self.lemma = lemma
        self.reason = reason
        self.graph6 = graph6
        self.params = params or {}


class RelaxedShortfall(LemmaFailure):
    """A conclusion failed after relaxed mode waived the gate that guarantees it.

    Not a counterexample: the waived magnitude hypothesis is what the proof
    needs at this point.
    """


@dataclass
class Outcome:
    """Internal result of a procedure before it becomes a certificate."""

    bullet: str
    kind: str
    sets: Dict[str, int]
    info: Dict[str, Any] = field(default_factory=dict)


class Run:
    """Context of one top-level call: graph, oracle, mode and trace."""

    def __init__(self, g: Graph, lemma: str, params: Dict[str, Any], mode: str = "strict", klass: str = "B"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.g = g
        self.orc: Oracle = oracle_for(g)
        self.mode = mode
        self.builder = CertBuilder(g, lemma, params, mode, klass)
        self.depth = 0

    @property
    def relaxed(self) -> bool:
        return self.mode == "relaxed"

    def chi(self, s: int) -> int:
        return self.orc.chi(s)

    def note(self, step: str, **info: Any) -> None:
        if self.depth:
            info.setdefault("level", self.depth)
        self.builder.note(step, **info)

    def gate(self, ok: bool, what: str) -> None:
        """Magnitude gate: strict mode enforces it, relaxed mode records a waiver."""
        if ok:
            return
        if self.relaxed:
            self.builder.waive(what)
        else:
            raise GateError(f"magnitude hypothesis fails: {what}")

    def fail(self, reason: str) -> None:
        """Raise the right failure for a conclusion the proof guarantees."""
        cls = RelaxedShortfall if self.builder.waivers else LemmaFailure
        extra = f" (waived: {'; '.join(self.builder.waivers)})" if self.builder.waivers else ""
        raise cls(self.builder.lemma, reason + extra, self.builder.trace[0]["graph6"], self.builder.params)

    def nested(self) -> "_Nested":
        return _Nested(self)

    def certificate(self, out: Outcome, inputs: Dict[str, int], claims: List[Tuple[str, str, Fraction]],
                    **extra: Any) -> Certificate:
        b = self.builder
        for name, m in inputs.items():
            b.add_set(name, m)
        for name, m in out.sets.items():
            b.add_set(name, m)
        info = dict(out.info)
        info.update(extra)
        return b.finish(out.kind, out.bullet, claims, **info)


class _Nested:
    def __init__(self, run: Run):
        self.run = run

    def __enter__(self):
        self.run.depth += 1
        return self.run

    def __exit__(self, *exc):
        self.run.depth -= 1
        return False


# ---------------------------------------------------------------------------
# shared helpers


def require(ok: bool, clause: str, witness: Any = None) -> None:
    if not ok:
        raise PreconditionError(clause, witness)


def in_range(x: Fraction, lo: Fraction, hi: Fraction, name: str, lo_open: bool = True) -> Fraction:
    x = q(x)
    ok = (x > lo if lo_open else x >= lo) and x <= hi
    require(ok, f"{name} must lie in {'(' if lo_open else '['}{lo}, {hi}]", x)
    return x


def root_of(x: Fraction, n: int, name: str) -> Fraction:
    """Exact n-th root; parameters whose roots enter thresholds must be perfect powers."""
    r = exact_root(x, n)
    require(r is not None, f"{name} must be a perfect {n}-th power of a rational", x)
    return r


def check_p5_free(g: Graph, s: int) -> None:
    w = find_induced_p5(g, s)
    if w is not None:
        raise P5Found(w)


def maximal_component(run: Run, s: int) -> int:
    """Component C of G[S] with chi(C) = chi(S); least vertex breaks ties."""
    best = 0
    for c in components(run.g, s):
        if run.chi(c) == run.chi(s) and (not best or least(c) < least(best)):
            best = c
    return best


def anticomponents(g: Graph, s: int) -> List[int]:
    return components(g, s, "anticonnected")


def split_on(g: Graph, x: int, c: int) -> Tuple[int, int, int]:
    """(complete to C, anticomplete to C, mixed on C) parts of X."""
    comp = anti = mixed = 0
    for v in bits(x):
        nb = g.nbrs(v) & c
        if nb == c:
            comp |= 1 << v
        elif not nb:
            anti |= 1 << v
        else:
            mixed |= 1 << v
    return comp, anti, mixed


def mixed_p5(g: Graph, v: int, c: int, extra: int) -> None:
    """Raise P5Found for a vertex mixed on a connected set, using a helper vertex.

    ``extra`` is a vertex set anticomplete to C whose members see v's side.
    The caller only reaches here when the proof derives an induced P5; if the
    search below cannot exhibit one the hypothesis itself was misread.
    """
    w = find_induced_p5(g, c | (1 << v) | extra)
    if w is None:
        raise AssertionError("mixed vertex without an induced P5")
    raise P5Found(w)


def saturate_pair(g: Graph, s: int, x: int, y: int, kind: PairKind) -> Tuple[int, int]:
    """Grow a pure pair inside S to a fixpoint, keeping its kind."""
    for _ in range(g.n + 1):
        if kind is PairKind.ANTICOMPLETE:
            nx = s & ~y & ~_union_nbrs(g, y)
            ny = s & ~nx & ~_union_nbrs(g, nx)
        else:
            nx = s & ~y & _common_nbrs(g, y, s)
            ny = s & ~nx & _common_nbrs(g, nx, s)
        if (nx, ny) == (x, y) or not nx or not ny:
            break
        x, y = nx, ny
    return x, y


def _union_nbrs(g: Graph, s: int) -> int:
    out = 0
    for v in bits(s):
        out |= g.closed(v)
    return out


def _common_nbrs(g: Graph, s: int, within: int) -> int:
    out = within
    for v in bits(s):
        out &= g.nbrs(v)
    return out


def union_nbrs(g: Graph, s: int) -> int:
    """N(S): vertices outside S with a neighbour in S."""
    out = 0
    for v in bits(s):
        out |= g.nbrs(v)
    return out & ~s


def common_nbrs(g: Graph, s: int, within: int) -> int:
    return _common_nbrs(g, s, within)


def connected_subsets(g: Graph, s: int, limit: Optional[int] = None) -> Iterator[int]:
    """All nonempty connected subsets of G[S], each exactly once.

    Root-based enumeration: for every root r, extend sets whose least vertex
    is r by neighbours above r, branching include/exclude on one frontier
    vertex at a time.
    """
    count = 0
    for r in bits(s):
        allowed = s & ~((1 << (r + 1)) - 1)
        stack = [(1 << r, g.nbrs(r) & allowed, 0)]
        while stack:
            cur, frontier, banned = stack.pop()
            frontier &= ~banned
            if not frontier:
                yield cur
                count += 1
                if limit is not None and count >= limit:
                    return
                continue
            v = least(frontier)
            # exclude v
            stack.append((cur, frontier & ~(1 << v), banned | (1 << v)))
            # include v
            nf = (frontier | (g.nbrs(v) & allowed)) & ~cur & ~(1 << v)
            stack.append((cur | (1 << v), nf, banned))


def pair_kind(g: Graph, a: int, b: int) -> PairKind:
    return classify_pair(g, a, b)


def fits(run: Run, s: int, thr: Fraction) -> bool:
    return Fraction(run.chi(s)) >= thr


def blockade_outcome(bullet: str, blocks: List[int], tag: str, density: Optional[Fraction] = None,
                     **info: Any) -> Outcome:
    sets = {f"B{i}": b for i, b in enumerate(blocks, 1)}
    info = dict(info)
    info["tag"] = tag
    if density is not None:
        info["density"] = density
    return Outcome(bullet, "blockade", sets, info)


def blocks_of(out: Outcome, prefix: str = "B") -> List[int]:
    out_blocks = []
    i = 1
    while f"{prefix}{i}" in out.sets:
        out_blocks.append(out.sets[f"{prefix}{i}"])
        i += 1
    return out_blocks


def block_claims(k: int, thr: Fraction, prefix: str = "B") -> List[Tuple[str, str, Fraction]]:
    return [(f"chi({prefix}{i})", ">=", Fraction(thr)) for i in range(1, k + 1)]


def equal_chi_partition(run: Run, s: int, parts: int) -> Optional[List[int]]:
    """``parts`` disjoint subsets of S with chi(S)/(2 parts) <= chi <= chi(S)/parts.

    Vertices are added in index order; a part closes as soon as it reaches
    the lower bound, which it can overshoot by nothing since adding one
    vertex raises chi by at most one.  Vertices left over after the last
    part are dropped.  Returns None when chi(S) < 2*parts leaves no room.
    """
    total = run.chi(s)
    if parts < 1 or total < 2 * parts:
        return None
    low = Fraction(total, 2 * parts)
    out: List[int] = []
    cur = 0
    for v in bits(s):
        cur |= 1 << v
        if run.chi(cur) >= low:
            out.append(cur)
            cur = 0
            if len(out) == parts:
                break
    if len(out) < parts:
        return None
    for part in out:
        if not low <= run.chi(part) <= Fraction(total, parts):
            raise AssertionError("equal-chi partition left its window")
    return out


Supplier = Callable[..., Any]

__all__ = [
    "GateError", "LemmaFailure", "RelaxedShortfall", "block_claims", "blockade_outcome", "blocks_of",
    "equal_chi_partition", "MODES", "Outcome", "PreconditionError", "Run", "SparsityFailure",
    "anticomponents", "check_p5_free", "common_nbrs", "connected_subsets", "fits", "in_range",
    "maximal_component", "mixed_p5", "pair_kind", "require", "root_of", "saturate_pair", "split_on",
    "union_nbrs",
]
