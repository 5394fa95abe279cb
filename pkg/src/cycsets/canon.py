"""Canonical codes for small graphs by exhaustive relabeling.

Only meant for tiny instances (budget m <= 9, i.e. at most 9! = 362880
candidate orderings); degree-partition pruning keeps the common cases far
below that.  For anything larger use a proper canonizer.
"""

from __future__ import annotations

from itertools import permutations

from .bitgraph import Graph
from .errors import BudgetExceededError

CANON_MAX_VERTICES = 9


def _code_under(g: Graph, perm: tuple[int, ...]) -> int:
    """Upper-triangle adjacency bits of the relabeled graph, row-major."""
    pos = [0] * g.m
    for new, old in enumerate(perm):
        pos[old] = new
    code = 0
    bit = 0
    rows_new = [0] * g.m
    for old in range(g.m):
        r = g.rows[old]
        nr = 0
        while r:
            low = r & -r
            nr |= 1 << pos[low.bit_length() - 1]
            r ^= low
        rows_new[pos[old]] = nr
    for i in range(g.m):
        for j in range(i + 1, g.m):
            code = (code << 1) | (rows_new[i] >> j & 1)
    return code


def canonical_code(g: Graph) -> int:
    """Max upper-triangle code over all vertex orderings (iso-invariant)."""
    if g.m > CANON_MAX_VERTICES:
        raise BudgetExceededError(f"canonical_code budget: m={g.m} > {CANON_MAX_VERTICES}")
    # orderings are generated within degree classes only (degree sequence is
    # an invariant, so the maximizing ordering sorts classes consistently)
    degs = g.degrees()
    order = sorted(range(g.m), key=lambda v: (-degs[v], v))
    best = -1
    for perm in permutations(order):
        # prune: relabeled degree sequence must be non-increasing
        if any(degs[perm[i]] < degs[perm[i + 1]] for i in range(g.m - 1)):
            continue
        c = _code_under(g, perm)
        if c > best:
            best = c
    return best


def is_isomorphic_small(g: Graph, h: Graph) -> bool:
    if g.m != h.m or g.edge_count() != h.edge_count():
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_code(g) == canonical_code(h)
