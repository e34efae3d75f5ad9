from __future__ import annotations

from itertools import combinations

from hypothesis import strategies as st

from chiforge.graph_core import Graph


@st.composite
def graphs(draw, max_n: int = 9):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])


def brute_chi(g: Graph, s: int | None = None) -> int:
    """Smallest k admitting a proper colouring of G[S], by plain backtracking."""
    s = g.full if s is None else s
    verts = [v for v in range(g.n) if s >> v & 1]
    if not verts:
        return 0
    for k in range(1, len(verts) + 1):
        col = {}

        def place(i):
            if i == len(verts):
                return True
            v = verts[i]
            for c in range(k):
                if all(col.get(u) != c for u in verts[:i] if g.has_edge(u, v)):
                    col[v] = c
                    if place(i + 1):
                        return True
            col.pop(v, None)
            return False

        if place(0):
            return k
    return len(verts)


def naive_p5(g: Graph) -> bool:
    """Some 5 vertices induce exactly a path, judged by degree sequence and connectivity."""
    for five in combinations(range(g.n), 5):
        es = [(u, v) for u, v in combinations(five, 2) if g.has_edge(u, v)]
        if len(es) != 4:
            continue
        deg = sorted(sum(v in e for e in es) for v in five)
        if deg != [1, 1, 2, 2, 2]:
            continue
        seen, todo = {five[0]}, [five[0]]
        while todo:
            x = todo.pop()
            for u, v in es:
                for a, b in ((u, v), (v, u)):
                    if a == x and b not in seen:
                        seen.add(b)
                        todo.append(b)
        if len(seen) == 5:
            return True
    return False
