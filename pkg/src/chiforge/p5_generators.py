"""Seeded generation of P5-free graphs.

Randomness comes only from ``random.Random(seed)`` (CPython's Mersenne
Twister).  Edges of G(n, p) are drawn for pairs ``(i, j)``, ``i < j``, in
lexicographic order, one ``rng.random() < p`` test each; ports that replay
MT19937 with the same draw order reproduce every instance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

from .graph_core import Graph, GraphError, bits, disjoint_union, find_induced_p5, induced, join, to_list
from .chi_oracles import P5Found


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    strategy: str = "repair"  # rejection | repair | family
    n: int = 8
    p: float = 0.5
    seed: int = 0
    family: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    max_retries: int = 2000


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def repair(g: Graph) -> Graph:
    """Delete the least vertex of the least induced P5 until none is left."""
    while True:
        wit = find_induced_p5(g)
        if wit is None:
            return g
        g = induced(g, g.full & ~(1 << wit[0]))


def random_p5free(spec: GenSpec) -> Graph:
    if spec.n < 0 or not 0 <= spec.p <= 1:
        raise GenerationError("need n >= 0 and 0 <= p <= 1")
    rng = random.Random(spec.seed)
    if spec.strategy == "repair":
        g = repair(gnp(spec.n, spec.p, rng))
    elif spec.strategy == "rejection":
        for _ in range(spec.max_retries):
            g = gnp(spec.n, spec.p, rng)
            if find_induced_p5(g) is None:
                break
        else:
            raise GenerationError(f"rejection sampling exceeded {spec.max_retries} retries")
    elif spec.strategy == "family":
        name = spec.family or "mixed"
        if name == "mixed":
            g = random_composite(spec.n, rng)
        else:
            g = family(name, **spec.params)
    else:
        raise GenerationError(f"unknown strategy {spec.strategy!r}")
    if find_induced_p5(g) is not None:  # postcondition, never expected to fire
        raise GenerationError("generator produced a graph with an induced P5")
    return g


# ---------------------------------------------------------------------------
# families


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_multipartite(parts: Sequence[int]) -> Graph:
    g = Graph.empty(0)
    for k in parts:
        g = join(g, Graph.empty(k))
    return g


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def split_graph(clique: int, stable: int, p: float = 0.5, seed: int = 0) -> Graph:
    """Clique on 0..clique-1, stable set after it, random edges across."""
    rng = random.Random(seed)
    edges = [(i, j) for i in range(clique) for j in range(i + 1, clique)]
    edges += [(i, clique + j) for i in range(clique) for j in range(stable) if rng.random() < p]
    return Graph.from_edges(clique + stable, edges)


def cograph(n: int, seed: int = 0) -> Graph:
    """Random cograph built by recursive disjoint union / join."""
    rng = random.Random(seed)

    def build(m: int) -> Graph:
        if m == 1:
            return Graph.empty(1)
        k = rng.randint(1, m - 1)
        left, right = build(k), build(m - k)
        return join(left, right) if rng.random() < 0.5 else disjoint_union(left, right)

    return build(n) if n > 0 else Graph.empty(0)


def substitute(g: Graph, v: int, h: Graph) -> Graph:
    """Replace v by a copy of H whose vertices are all joined to N_G(v).

    Remaining vertices of G keep their relative order and come first; H
    follows.  Both inputs must be P5-free and so is the result.
    """
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} not in graph")
    for name, graph in (("G", g), ("H", h)):
        wit = find_induced_p5(graph)
        if wit is not None:
            raise P5Found(wit)
    rest = g.full & ~(1 << v)
    base = induced(g, rest)
    keep = to_list(rest)
    pos = {u: i for i, u in enumerate(keep)}
    nv = [pos[u] for u in bits(g.nbrs(v))]
    out = disjoint_union(base, h)
    edges = out.edges() + [(a, base.n + b) for a in nv for b in range(h.n)]
    res = Graph.from_edges(out.n, edges)
    if res.n != g.n - 1 + h.n:
        raise GenerationError("substitution size formula violated")
    wit = find_induced_p5(res)
    if wit is not None:
        raise GenerationError(f"substitution produced an induced P5 {wit}")
    return res


FAMILIES = {
    "complete": lambda n=4: complete_graph(n),
    "edgeless": lambda n=4: Graph.empty(n),
    "complete_multipartite": lambda parts=(2, 2, 2): complete_multipartite(parts),
    "split": split_graph,
    "cograph": cograph,
    "cycle5": lambda: cycle(5),
    "path": lambda n=4: path(n) if n <= 4 else _bad_path(n),
    "disjoint_cliques": lambda sizes=(3, 3): _cliques(sizes),
}


def _bad_path(n: int) -> Graph:
    raise GenerationError("paths on more than 4 vertices contain P5")


def _cliques(sizes: Sequence[int]) -> Graph:
    g = Graph.empty(0)
    for k in sizes:
        g = disjoint_union(g, complete_graph(k))
    return g


def family(name: str, *args, **params) -> Graph:
    if name == "substitute":
        return substitute(*args, **params)
    try:
        maker = FAMILIES[name]
    except KeyError:
        raise GenerationError(f"unknown family {name!r}") from None
    if "parts" in params:
        params["parts"] = tuple(params["parts"])
    return maker(*args, **params)


def random_composite(n: int, rng: random.Random) -> Graph:
    """P5-free graph of about n vertices from nested substitutions of small pieces."""
    if n <= 0:
        return Graph.empty(0)

    def piece(m: int) -> Graph:
        kind = rng.choice(("cycle5", "split", "cograph", "multipartite", "complete"))
        if kind == "cycle5" and m >= 5:
            return cycle(5)
        if kind == "split":
            c = rng.randint(1, max(1, m - 1))
            return split_graph(c, m - c, rng.random(), rng.randrange(1 << 30))
        if kind == "multipartite":
            parts = []
            left = m
            while left:
                k = rng.randint(1, left)
                parts.append(k)
                left -= k
            return complete_multipartite(parts)
        if kind == "complete":
            return complete_graph(m)
        return cograph(m, rng.randrange(1 << 30))

    g = piece(min(n, rng.randint(1, 5)))
    while g.n < n:
        v = rng.randrange(g.n)
        m = min(n - g.n + 1, rng.randint(1, 5))
        g = substitute(g, v, piece(m))
    return g
