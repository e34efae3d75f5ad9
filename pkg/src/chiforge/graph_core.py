"""Immutable bitset graphs, subset algebra and induced-P5 detection.

Vertices are always ``0..n-1``.  Vertex sets are plain ``int`` bitmasks,
bit ``v`` set meaning ``v`` is a member.  Every "pick one" rule breaks ties
by least vertex index so that downstream certificates are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, Tuple


class GraphError(ValueError):
    """Raised on malformed graphs, vertex sets or encodings."""


# ---------------------------------------------------------------------------
# bitset helpers


def bits(mask: int) -> Iterator[int]:
    """Yield members of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> list[int]:
    return list(bits(mask))


def from_iter(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if v < 0:
            raise GraphError(f"negative vertex {v}")
        mask |= 1 << v
    return mask


def size(mask: int) -> int:
    return mask.bit_count()


def least(mask: int) -> int:
    """Least member of a nonempty mask."""
    if not mask:
        raise GraphError("least() of empty set")
    return (mask & -mask).bit_length() - 1


# ---------------------------------------------------------------------------
# graph


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``0..n-1`` with neighbour bitsets."""

    n: int
    adj: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("negative vertex count")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"row {v} has bits outside 0..n-1")
            if row >> v & 1:
                raise GraphError(f"self-loop at {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric edge {v}-{u}")

    # construction -------------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    # queries ------------------------------------------------------------
    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def nbrs(self, v: int) -> int:
        return self.adj[v]

    def closed(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(size(r) for r in self.adj) // 2

    def complement(self) -> "Graph":
        full = self.full
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def check_set(self, mask: int) -> int:
        if mask < 0 or mask & ~self.full:
            raise GraphError(f"vertex set out of range for n={self.n}")
        return mask

    def __repr__(self) -> str:  # compact, useful in failing asserts
        return f"Graph(n={self.n}, g6={encode_graph6(self).decode()!r})"


# ---------------------------------------------------------------------------
# graph6 codec


def _encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def encode_graph6(g: Graph) -> bytes:
    """Canonical graph6 bytes (no header, no newline) for the labelled graph."""
    out = bytearray(_encode_n(g.n))
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def decode_graph6(data: bytes | str) -> Graph:
    """Decode one graph6 line; raises GraphError on malformed input."""
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    if not data:
        raise GraphError("empty graph6 string")
    if any(b < 63 or b > 126 for b in data):
        raise GraphError("graph6 byte out of range")
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise GraphError("malformed graph6 header")
        n, pos = 0, 8
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
    else:
        if len(data) < 4:
            raise GraphError("malformed graph6 header")
        n, pos = 0, 4
        for b in data[1:4]:
            n = (n << 6) | (b - 63)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise GraphError(f"graph6 length mismatch: expected {need} data bytes, got {len(body)}")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    pad = need * 6 - nbits
    if pad and (body[-1] - 63) & ((1 << pad) - 1):
        raise GraphError("graph6 trailing padding bits are nonzero")
    return Graph(n, tuple(rows))


def to_adjlist_text(g: Graph) -> str:
    """Debug format: ``n m`` then one ``u v`` line per edge."""
    es = g.edges()
    return "\n".join([f"{g.n} {len(es)}"] + [f"{u} {v}" for u, v in es]) + "\n"


def from_adjlist_text(text: str) -> Graph:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise GraphError("adjacency text needs an 'n m' header")
    n, m = int(lines[0][0]), int(lines[0][1])
    if len(lines) - 1 != m:
        raise GraphError(f"expected {m} edge lines, found {len(lines) - 1}")
    return Graph.from_edges(n, ((int(a), int(b)) for a, b in lines[1:]))


# ---------------------------------------------------------------------------
# subset algebra


def induced(g: Graph, s: int) -> Graph:
    """G[S], relabelled by increasing original index."""
    g.check_set(s)
    order = to_list(s)
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        r = 0
        for u in bits(g.adj[v] & s):
            r |= 1 << pos[u]
        rows.append(r)
    return Graph(len(order), tuple(rows))


def lift(mask: int, s: int) -> int:
    """Map a set of G[S] (relabelled) back to original indices."""
    order = to_list(s)
    return from_iter(order[i] for i in bits(mask))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    rows = list(g.adj) + [row << g.n for row in h.adj]
    return Graph(g.n + h.n, tuple(rows))


def join(g: Graph, h: Graph) -> Graph:
    gm = g.full
    hm = h.full << g.n
    rows = [row | hm for row in g.adj] + [(row << g.n) | gm for row in h.adj]
    return Graph(g.n + h.n, tuple(rows))


def _component_sweep(rows: Sequence[int], s: int) -> list[int]:
    out = []
    rest = s
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= rows[v]
            nxt &= rest & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        rest &= ~comp
    return out


def components(g: Graph, s: int, mode: str = "connected") -> list[int]:
    """Components of G[S] (or of its complement when mode is 'anticonnected').

    Ordered by least vertex.  Empty S gives an empty list.
    """
    g.check_set(s)
    if mode == "connected":
        rows: Sequence[int] = g.adj
    elif mode == "anticonnected":
        rows = g.complement().adj
    else:
        raise GraphError(f"unknown component mode {mode!r}")
    return _component_sweep(rows, s)


def is_connected(g: Graph, s: int) -> bool:
    return s != 0 and len(components(g, s)) == 1


def is_anticonnected(g: Graph, s: int) -> bool:
    return s != 0 and len(components(g, s, "anticonnected")) == 1


class PairKind(str, Enum):
    COMPLETE = "complete"
    ANTICOMPLETE = "anticomplete"
    MIXED = "mixed"


def classify_pair(g: Graph, a: int, b: int) -> PairKind:
    """Whether A is complete, anticomplete or neither to B."""
    g.check_set(a)
    g.check_set(b)
    if not a or not b:
        raise GraphError("classify_pair needs nonempty sets")
    if a & b:
        raise GraphError("classify_pair needs disjoint sets")
    complete = True
    anti = True
    for v in bits(a):
        row = g.adj[v] & b
        if row != b:
            complete = False
        if row:
            anti = False
        if not complete and not anti:
            return PairKind.MIXED
    return PairKind.COMPLETE if complete else PairKind.ANTICOMPLETE


def mixed_on(g: Graph, v: int, s: int) -> str:
    """'pure-complete', 'pure-anticomplete' or 'mixed' for v against S."""
    g.check_set(s)
    if s >> v & 1:
        raise GraphError(f"vertex {v} lies inside the set")
    if not s:
        raise GraphError("mixed_on needs a nonempty set")
    row = g.adj[v] & s
    if row == s:
        return "pure-complete"
    if row == 0:
        return "pure-anticomplete"
    return "mixed"


def is_mixed(g: Graph, v: int, s: int) -> bool:
    row = g.adj[v] & s
    return row != 0 and row != s


# ---------------------------------------------------------------------------
# induced P5


def find_induced_p5(g: Graph, within: Optional[int] = None) -> Optional[Tuple[int, int, int, int, int]]:
    """Lexicographically least ordered induced P5 ``(v1, .., v5)`` or None.

    Depth-first extension where each new vertex must be adjacent to the
    previous one and non-adjacent to all earlier ones; candidates are tried
    in increasing order, so the first hit is the least tuple.
    """
    adj = g.adj
    s = g.full if within is None else g.check_set(within)
    for v1 in bits(s):
        c1 = adj[v1] | (1 << v1)
        for v2 in bits(adj[v1] & s):
            c2 = c1 | adj[v2]
            for v3 in bits(adj[v2] & s & ~c1):
                c3 = c2 | adj[v3]
                for v4 in bits(adj[v3] & s & ~c2):
                    cand = adj[v4] & s & ~c3
                    if cand:
                        return (v1, v2, v3, v4, least(cand))
    return None


def is_p5_free(g: Graph, within: Optional[int] = None) -> bool:
    return find_induced_p5(g, within) is None


# ---------------------------------------------------------------------------
# blockades


BLOCKADE_TAGS = ("complete", "anticomplete", "pure", "dense", "anti_or_dense", "untagged")


@dataclass(frozen=True)
class Blockade:
    """Ordered disjoint nonempty blocks with one relation tag for every pair.

    ``tag`` is one of BLOCKADE_TAGS; for 'dense', ``eps`` holds the density
    parameter and later blocks are (eps, chi)-dense to earlier ones;
    'anti_or_dense' allows either relation pair by pair.
    """

    blocks: Tuple[int, ...]
    tag: str = "untagged"
    eps: Optional[object] = None

    def __post_init__(self) -> None:
        if self.tag not in BLOCKADE_TAGS:
            raise GraphError(f"unknown blockade tag {self.tag!r}")
        seen = 0
        for b in self.blocks:
            if not b:
                raise GraphError("blockade block is empty")
            if b & seen:
                raise GraphError("blockade blocks overlap")
            seen |= b

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def support(self) -> int:
        m = 0
        for b in self.blocks:
            m |= b
        return m
