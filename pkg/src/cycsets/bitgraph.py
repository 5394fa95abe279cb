"""Core graph representation: simple undirected graphs as symmetric bit-rows.

Vertices are 0..m-1.  The adjacency matrix is stored as m Python ints
(arbitrary-width bitmasks), one row per vertex, so neighborhood
intersection/union is a single int op regardless of m.  Everything is
immutable after construction; all operations elsewhere in the package are
pure functions of these values.

Also provides VertexSet / Cut wrappers with bitmask semantics and a
bit-exact graph6 reader/writer (header optional, standard N(n) short and
extended forms).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError

GRAPH6_HEADER = ">>graph6<<"


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int):
    """Iterate set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    m: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.m < 0 or len(self.rows) != self.m:
            raise PreconditionError("row count must equal vertex count")
        full = (1 << self.m) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise PreconditionError(f"row {v} has bits outside 0..{self.m - 1}")
            if row >> v & 1:
                raise PreconditionError(f"self-loop at {v}")
        for v, row in enumerate(self.rows):
            for u in bits_of(row):
                if not self.rows[u] >> v & 1:
                    raise PreconditionError(f"asymmetric adjacency {v},{u}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def empty(m: int) -> "Graph":
        return Graph(m, (0,) * m)

    @staticmethod
    def from_edges(m: int, edges) -> "Graph":
        rows = [0] * m
        for u, v in edges:
            if u == v or not (0 <= u < m and 0 <= v < m):
                raise PreconditionError(f"bad edge ({u},{v}) for m={m}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(m, tuple(rows))

    @staticmethod
    def complete(m: int) -> "Graph":
        full = (1 << m) - 1
        return Graph(m, tuple(full ^ (1 << v) for v in range(m)))

    @staticmethod
    def complete_bipartite(a: int, b: int) -> "Graph":
        left = (1 << a) - 1
        right = ((1 << (a + b)) - 1) ^ left
        rows = [right] * a + [left] * b
        return Graph(a + b, tuple(rows))

    @staticmethod
    def cycle(m: int) -> "Graph":
        if m < 3:
            raise PreconditionError("cycle needs >= 3 vertices")
        return Graph.from_edges(m, [(i, (i + 1) % m) for i in range(m)])

    # -- basic queries -----------------------------------------------------

    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def min_degree(self) -> int:
        return min(self.degrees()) if self.m else 0

    def max_degree(self) -> int:
        return max(self.degrees()) if self.m else 0

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self):
        """All edges (u, v) with u < v, lexicographic order."""
        for u in range(self.m):
            for v in bits_of(self.rows[u] >> (u + 1) << (u + 1)):
                yield (u, v)

    def neighbors(self, v: int) -> list[int]:
        return list(bits_of(self.rows[v]))

    # -- derived graphs ----------------------------------------------------

    def with_edges(self, edges) -> "Graph":
        rows = list(self.rows)
        for u, v in edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.m, tuple(rows))

    def without_edges(self, edges) -> "Graph":
        rows = list(self.rows)
        for u, v in edges:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        return Graph(self.m, tuple(rows))

    def complement(self) -> "Graph":
        full = self.full_mask()
        return Graph(self.m, tuple((full ^ r) & ~(1 << v) for v, r in enumerate(self.rows)))

    def relabel(self, perm) -> "Graph":
        """Image under vertex relabeling v -> perm[v]."""
        rows = [0] * self.m
        for u, v in self.edges():
            pu, pv = perm[u], perm[v]
            rows[pu] |= 1 << pv
            rows[pv] |= 1 << pu
        return Graph(self.m, tuple(rows))

    def induced(self, mask: int) -> tuple["Graph", list[int]]:
        """Induced subgraph on the masked vertices, relabeled 0..k-1.

        Returns (subgraph, vertex_list) where vertex_list[i] is the original
        label of new vertex i (increasing order).
        """
        verts = list(bits_of(mask))
        index = {v: i for i, v in enumerate(verts)}
        rows = [0] * len(verts)
        for i, v in enumerate(verts):
            for u in bits_of(self.rows[v] & mask):
                rows[i] |= 1 << index[u]
        return Graph(len(verts), tuple(rows)), verts

    # -- edge counts between vertex sets -----------------------------------

    def edges_between(self, amask: int, bmask: int) -> int:
        """e(A,B) = sum over a in A of |N(a) ∩ B|.

        Edges with both endpoints in A ∩ B are counted twice, matching the
        usual convention for possibly-overlapping sets.
        """
        return sum((self.rows[a] & bmask).bit_count() for a in bits_of(amask))

    def edges_inside(self, mask: int) -> int:
        return self.edges_between(mask, mask) // 2

    def non_edges_inside(self, mask: int) -> int:
        k = mask.bit_count()
        return k * (k - 1) // 2 - self.edges_inside(mask)


@dataclass(frozen=True)
class VertexSet:
    mask: int
    m: int

    def __post_init__(self):
        if self.mask & ~((1 << self.m) - 1):
            raise PreconditionError("vertex-set members outside 0..m-1")

    @staticmethod
    def of(m: int, vertices) -> "VertexSet":
        return VertexSet(mask_of(vertices), m)

    @staticmethod
    def full(m: int) -> "VertexSet":
        return VertexSet((1 << m) - 1, m)

    @staticmethod
    def empty(m: int) -> "VertexSet":
        return VertexSet(0, m)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def members(self) -> list[int]:
        return list(bits_of(self.mask))

    def contains(self, v: int) -> bool:
        return bool(self.mask >> v & 1)

    def union(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask, self.m)

    def intersect(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask, self.m)

    def minus(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask, self.m)

    def complement(self) -> "VertexSet":
        return VertexSet(((1 << self.m) - 1) ^ self.mask, self.m)


@dataclass(frozen=True)
class Cut:
    x: VertexSet
    y: VertexSet

    def __post_init__(self):
        if self.x.m != self.y.m:
            raise PreconditionError("cut sides live in different vertex universes")
        if self.x.mask & self.y.mask:
            raise PreconditionError("cut sides overlap")
        if self.x.mask | self.y.mask != (1 << self.x.m) - 1:
            raise PreconditionError("cut sides do not cover the vertex set")

    @property
    def m(self) -> int:
        return self.x.m

    def is_balanced(self) -> bool:
        return self.x.size == self.y.size

    def restrict(self, smask: int) -> "Cut":
        """The induced cut (X ∩ S, Y ∩ S) inside the subuniverse S, relabeled.

        Vertices of S are relabeled 0..|S|-1 in increasing original order
        (same convention as Graph.induced).
        """
        verts = list(bits_of(smask))
        xm = ym = 0
        for i, v in enumerate(verts):
            if self.x.mask >> v & 1:
                xm |= 1 << i
            else:
                ym |= 1 << i
        k = len(verts)
        return Cut(VertexSet(xm, k), VertexSet(ym, k))


# ---------------------------------------------------------------------------
# graph6 interchange format (bit-exact per the standard encoding)
# ---------------------------------------------------------------------------


def _g6_encode_n(n: int) -> bytes:
    if n < 0:
        raise PreconditionError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes(
            [126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63]
        )
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in range(30, -1, -6)])
    raise PreconditionError("vertex count too large for graph6")


def to_graph6(g: Graph, header: bool = False) -> str:
    """Encode a graph in graph6: N(n) then the upper triangle column-major."""
    out = bytearray()
    if header:
        out += GRAPH6_HEADER.encode()
    out += _g6_encode_n(g.m)
    buf = 0
    nbits = 0
    for j in range(1, g.m):
        col = g.rows[j]
        for i in range(j):
            buf = (buf << 1) | (col >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(buf + 63)
                buf = nbits = 0
    if nbits:
        out.append((buf << (6 - nbits)) + 63)
    return out.decode("ascii")


def from_graph6(text: str) -> Graph:
    """Decode one graph6 line (optional >>graph6<< header tolerated)."""
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    if not s:
        raise PreconditionError("empty graph6 string")
    data = s.encode("ascii", errors="strict")
    for b in data:
        if not 63 <= b <= 126:
            raise PreconditionError(f"invalid graph6 byte {b}")
    pos = 0
    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            if len(data) < 8:
                raise PreconditionError("truncated graph6 size field")
            n = 0
            for b in data[2:8]:
                n = (n << 6) | (b - 63)
            pos = 8
        else:
            if len(data) < 4:
                raise PreconditionError("truncated graph6 size field")
            n = 0
            for b in data[1:4]:
                n = (n << 6) | (b - 63)
            pos = 4
    else:
        n = data[0] - 63
        pos = 1
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) - pos != need:
        raise PreconditionError(
            f"graph6 body length {len(data) - pos} != expected {need} for n={n}"
        )
    bits = 0
    for b in data[pos:]:
        bits = (bits << 6) | (b - 63)
    total = 6 * need
    rows = [0] * n
    k = n * (n - 1) // 2
    idx = 0
    for j in range(1, n):
        for i in range(j):
            bit = bits >> (total - 1 - idx) & 1
            idx += 1
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    # trailing pad bits must be zero for a bit-exact encoding
    if k < total and bits & ((1 << (total - k)) - 1):
        raise PreconditionError("nonzero padding bits in graph6 body")
    return Graph(n, tuple(rows))
