"""Exact chromatic, clique and stability numbers with witnesses.

All answers are exact.  A vertex-count budget guards the exponential
searches; exceeding it raises :class:`TooLarge` instead of approximating.
The budget defaults to 30 and can be changed through the environment
variable ``CHIFORGE_SOLVE_BUDGET`` or per oracle.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .exact import ceil_root, q
from .graph_core import Graph, GraphError, bits, find_induced_p5, size, to_list

DEFAULT_BUDGET = 30


class TooLarge(RuntimeError):
    """The requested exact solve exceeds the configured vertex budget."""


class P5Found(ValueError):
    """An operation that needs a P5-free input found an induced P5."""

    def __init__(self, witness):
        super().__init__(f"graph contains an induced P5 {witness}")
        self.witness = witness


class EHFailure(RuntimeError):
    """Neither a clique nor a stable set reaches the requested size."""


def default_budget() -> int:
    raw = os.environ.get("CHIFORGE_SOLVE_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        val = int(raw)
    except ValueError as exc:
        raise ValueError(f"CHIFORGE_SOLVE_BUDGET must be an integer, got {raw!r}") from exc
    if val < 0:
        raise ValueError("CHIFORGE_SOLVE_BUDGET must be nonnegative")
    return val


@dataclass(frozen=True)
class ColoringWitness:
    """colors[i] is the colour of the i-th member of the coloured set."""

    domain: int
    colors: Tuple[int, ...]
    k: int

    def as_dict(self) -> Dict[int, int]:
        return dict(zip(to_list(self.domain), self.colors))


@dataclass(frozen=True)
class ExtremalWitness:
    kind: str  # 'clique' or 'stable'
    members: int

    @property
    def size(self) -> int:
        return size(self.members)


# ---------------------------------------------------------------------------
# search kernels (operate on a row tuple and a candidate mask)


def _max_clique(rows, cand: int) -> int:
    """Maximum clique inside ``cand``; greedy-colouring bound, least-index ties."""
    best = 0
    best_size = 0

    def colour_bound(p: int):
        # sequential greedy colouring; returns vertices with their colour count
        order = []
        uncol = p
        col = 0
        while uncol:
            col += 1
            avail = uncol
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~rows[v] & ~(1 << v)
                uncol &= ~(1 << v)
                order.append((v, col))
        return order

    def expand(r: int, rsize: int, p: int) -> None:
        nonlocal best, best_size
        order = colour_bound(p)
        for v, c in reversed(order):
            if rsize + c <= best_size:
                return
            nr = r | (1 << v)
            np_ = p & rows[v]
            if np_:
                expand(nr, rsize + 1, np_)
            elif rsize + 1 > best_size:
                best, best_size = nr, rsize + 1
            p &= ~(1 << v)

    if cand:
        expand(0, 0, cand)
    return best


def _greedy_dsatur(rows, s: int) -> Dict[int, int]:
    colour: Dict[int, int] = {}
    uncol = s
    sat: Dict[int, int] = {v: 0 for v in bits(s)}  # bitmask of neighbour colours
    while uncol:
        v = max(bits(uncol), key=lambda u: (sat[u].bit_count(), (rows[u] & uncol).bit_count(), -u))
        used = sat[v]
        c = 0
        while used >> c & 1:
            c += 1
        colour[v] = c
        uncol &= ~(1 << v)
        for u in bits(rows[v] & uncol):
            sat[u] |= 1 << c
    return colour


def _k_colour(rows, s: int, k: int, seed_clique: int) -> Optional[Dict[int, int]]:
    """Exhaustive DSATUR backtracking for a proper k-colouring of G[S]."""
    classes = [0] * k
    colour: Dict[int, int] = {}
    used = 0
    # pre-colour the clique: fixes colour symmetry
    for i, v in enumerate(bits(seed_clique)):
        if i >= k:
            return None
        classes[i] |= 1 << v
        colour[v] = i
        used = i + 1
    uncol = s & ~seed_clique

    def pick(uncol: int) -> int:
        best_v, best_key = -1, None
        for u in bits(uncol):
            r = rows[u]
            satn = sum(1 for c in range(used) if r & classes[c])
            key = (satn, (r & uncol).bit_count(), -u)
            if best_key is None or key > best_key:
                best_v, best_key = u, key
        return best_v

    def rec(uncol: int) -> bool:
        nonlocal used
        if not uncol:
            return True
        v = pick(uncol)
        r = rows[v]
        rest = uncol & ~(1 << v)
        for c in range(used):
            if not r & classes[c]:
                classes[c] |= 1 << v
                colour[v] = c
                if rec(rest):
                    return True
                classes[c] &= ~(1 << v)
        if used < k:
            c = used
            used += 1
            classes[c] |= 1 << v
            colour[v] = c
            if rec(rest):
                return True
            classes[c] &= ~(1 << v)
            used -= 1
        colour.pop(v, None)
        return False

    return dict(colour) if rec(uncol) else None


# ---------------------------------------------------------------------------
# oracle with per-graph cache


class Oracle:
    """Exact χ/ω/α on subsets of one graph, memoised by subset bitmask."""

    def __init__(self, g: Graph, budget: Optional[int] = None):
        self.g = g
        self.budget = default_budget() if budget is None else budget
        self._rows = g.adj
        self._crows = g.complement().adj
        self._chi: Dict[int, ColoringWitness] = {}
        self._omega: Dict[int, int] = {}
        self._alpha: Dict[int, int] = {}

    def _guard(self, s: int) -> None:
        self.g.check_set(s)
        if size(s) > self.budget:
            raise TooLarge(f"instance too large: {size(s)} vertices exceeds exact-solve budget {self.budget}")

    def clear(self) -> None:
        self._chi.clear()
        self._omega.clear()
        self._alpha.clear()

    # chi ------------------------------------------------------------------
    def coloring(self, s: Optional[int] = None) -> ColoringWitness:
        s = self.g.full if s is None else s
        hit = self._chi.get(s)
        if hit is not None:
            return hit
        self._guard(s)
        wit = self._solve_chi(s)
        self._chi[s] = wit
        return wit

    def chi(self, s: Optional[int] = None) -> int:
        return self.coloring(s).k

    def _solve_chi(self, s: int) -> ColoringWitness:
        rows = self._rows
        if not s:
            return ColoringWitness(0, (), 0)
        clique = _max_clique(rows, s)
        lo = size(clique)
        self._omega.setdefault(s, lo)
        greedy = _greedy_dsatur(rows, s)
        hi = max(greedy.values()) + 1
        best = greedy
        k = lo
        while k < hi:
            found = _k_colour(rows, s, k, clique)
            if found is not None:
                best = found
                break
            k += 1
        else:
            k = hi
        order = to_list(s)
        # relabel colours by first appearance for a canonical witness
        relabel: Dict[int, int] = {}
        cols = []
        for v in order:
            c = best[v]
            if c not in relabel:
                relabel[c] = len(relabel)
            cols.append(relabel[c])
        return ColoringWitness(s, tuple(cols), k)

    # omega / alpha --------------------------------------------------------
    def clique(self, s: Optional[int] = None) -> int:
        """A maximum clique of G[S] as a mask."""
        s = self.g.full if s is None else s
        self._guard(s)
        return _max_clique(self._rows, s)

    def stable(self, s: Optional[int] = None) -> int:
        s = self.g.full if s is None else s
        self._guard(s)
        return _max_clique(self._crows, s)

    def omega(self, s: Optional[int] = None) -> int:
        s = self.g.full if s is None else s
        if s not in self._omega:
            self._omega[s] = size(self.clique(s))
        return self._omega[s]

    def alpha(self, s: Optional[int] = None) -> int:
        s = self.g.full if s is None else s
        if s not in self._alpha:
            self._alpha[s] = size(self.stable(s))
        return self._alpha[s]

    def extremal_set(self, s: Optional[int] = None, mode: str = "clique") -> Tuple[int, ExtremalWitness]:
        if mode == "clique":
            m = self.clique(s)
        elif mode == "stable":
            m = self.stable(s)
        else:
            raise ValueError(f"unknown extremal mode {mode!r}")
        return size(m), ExtremalWitness(mode, m)

    # density ------------------------------------------------------------
    def density_check(self, s: int, eps, mode: str = "self", a: int = 0, b: int = 0) -> Tuple[bool, Optional[int]]:
        """Exact (eps, chi)-density tests with strict inequalities.

        mode 'self': G[S] is dense iff chi(S minus N[v]) < eps*chi(S) for all v in S.
        mode 'to': B is dense to A iff chi(A minus N(v)) < eps*chi(A) for all v in B.
        Returns (holds, least violating vertex or None).
        """
        eps = q(eps)
        if eps <= 0:
            raise ValueError("density parameter must be positive")
        g = self.g
        if mode == "self":
            bound = eps * self.chi(s)
            for v in bits(s):
                if self.chi(s & ~g.closed(v)) >= bound:
                    return False, v
            return True, None
        if mode == "to":
            bound = eps * self.chi(a)
            for v in bits(b):
                if self.chi(a & ~g.nbrs(v)) >= bound:
                    return False, v
            return True, None
        raise ValueError(f"unknown density mode {mode!r}")

    def is_dense(self, s: int, eps) -> bool:
        return self.density_check(s, eps, "self")[0]

    def is_dense_to(self, b: int, a: int, eps) -> bool:
        """True iff B is (eps, chi)-dense to A."""
        return self.density_check(0, eps, "to", a=a, b=b)[0]


@lru_cache(maxsize=64)
def oracle_for(g: Graph) -> Oracle:
    """Shared oracle per graph value (process-local)."""
    return Oracle(g)


def chi(g: Graph, s: Optional[int] = None) -> Tuple[int, ColoringWitness]:
    wit = oracle_for(g).coloring(s)
    return wit.k, wit


def extremal_set(g: Graph, s: Optional[int] = None, mode: str = "clique") -> Tuple[int, ExtremalWitness]:
    return oracle_for(g).extremal_set(s, mode)


def density_check(g: Graph, s: int, eps, mode: str = "self", a: int = 0, b: int = 0):
    return oracle_for(g).density_check(s, eps, mode, a, b)


def verify_coloring(g: Graph, s: int, witness: ColoringWitness) -> bool:
    """True iff the witness is a proper colouring of G[S] using colours < k."""
    if witness.domain != s or len(witness.colors) != size(s):
        raise GraphError("colouring witness domain does not match the vertex set")
    col = witness.as_dict()
    for v, c in col.items():
        if not 0 <= c < max(witness.k, 0):
            return False
        for u in bits(g.nbrs(v) & s):
            if col[u] == c:
                return False
    return True


def eh_extract(g: Graph, a) -> ExtremalWitness:
    """Larger of a maximum clique and a maximum stable set (clique on ties).

    Requires a P5-free graph; fails loudly if the result is smaller than
    ceil(n ** (1/a)), which would refute the supplied exponent.
    """
    a = q(a)
    if a < 1:
        raise ValueError("exponent must be at least 1")
    p5 = find_induced_p5(g)
    if p5 is not None:
        raise P5Found(p5)
    orc = oracle_for(g)
    cl = orc.clique()
    st = orc.stable()
    wit = ExtremalWitness("clique", cl) if size(cl) >= size(st) else ExtremalWitness("stable", st)
    need = ceil_root(g.n, a)
    if wit.size < need:
        raise EHFailure(f"largest clique/stable set has {wit.size} < {need} vertices")
    return wit
