"""Shared brute-force oracles and small fixture graphs.

The oracles here are deliberately primitive (plain backtracking, no
bitmask DP, no memoisation) so they are independent of the algorithms
under test.
"""

from __future__ import annotations

import random

from cycsets.bitgraph import Graph


def brute_has_ham_cycle(g: Graph, verts: list[int]) -> bool:
    """Backtracking search for a cycle through exactly `verts`."""
    n = len(verts)
    if n < 3:
        return False
    vset = set(verts)
    adj = {v: [u for u in vset if u != v and g.has_edge(v, u)] for v in vset}
    start = verts[0]
    used = {start}

    def extend(v: int, depth: int) -> bool:
        if depth == n:
            return g.has_edge(v, start)
        for w in adj[v]:
            if w not in used:
                used.add(w)
                if extend(w, depth + 1):
                    return True
                used.remove(w)
        return False

    return extend(start, 1)


def brute_cyclic_count(g: Graph) -> int:
    """Number of S ⊆ V(g) whose induced subgraph has a Hamilton cycle."""
    count = 0
    for mask in range(1 << g.m):
        verts = [v for v in range(g.m) if mask >> v & 1]
        if brute_has_ham_cycle(g, verts):
            count += 1
    return count


def brute_max_linear_forest(g: Graph, verts: list[int]) -> int:
    """Max edge count of a linear forest in g[verts], by edge-subset search."""
    edges = [
        (u, v)
        for i, u in enumerate(verts)
        for v in verts[i + 1 :]
        if g.has_edge(u, v)
    ]
    best = 0
    for emask in range(1 << len(edges)):
        chosen = [edges[i] for i in range(len(edges)) if emask >> i & 1]
        if len(chosen) <= best:
            continue
        deg: dict[int, int] = {}
        parent = {v: v for v in verts}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for u, v in chosen:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
            if deg[u] > 2 or deg[v] > 2:
                ok = False
                break
            ru, rv = find(u), find(v)
            if ru == rv:  # would close a cycle
                ok = False
                break
            parent[ru] = rv
        if ok:
            best = len(chosen)
    return best


def brute_min_vertex_cover(g: Graph, verts: list[int]) -> int:
    """Minimum vertex cover of g[verts] by subset enumeration."""
    edges = [
        (u, v)
        for i, u in enumerate(verts)
        for v in verts[i + 1 :]
        if g.has_edge(u, v)
    ]
    if not edges:
        return 0
    for size in range(len(verts) + 1):
        for cmask in range(1 << len(verts)):
            if bin(cmask).count("1") != size:
                continue
            chosen = {verts[i] for i in range(len(verts)) if cmask >> i & 1}
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    return len(verts)


def random_graph(m: int, seed: int, p: float = 0.5) -> Graph:
    """Erdos–Renyi graph from the stdlib RNG (independent of package RNG)."""
    rnd = random.Random(seed)
    edges = [
        (u, v) for u in range(m) for v in range(u + 1, m) if rnd.random() < p
    ]
    return Graph.from_edges(m, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)
