"""Hamiltonicity: exact decision, heuristic search, constructive builders.

Four layers:

* an exact subset-DP decider (budget 24 vertices) producing certificates or
  definitive refusals;
* a seeded rotation-extension engine: sound, incomplete, never claims
  non-Hamiltonicity;
* constructive routines that build Hamilton paths/cycles in dense regimes
  the way the existence arguments do (delete-and-splice, pigeonhole on
  cycle successors, cherry matchings over low-degree vertices, crossing
  connectors of length 2/3), validating every certificate;
* an O(#cycles) exact criterion for membership-sampled subsets of the
  extremal family.

All thresholds of the constructive routines are keyword parameters with the
regime defaults, so out-of-regime experimentation stays possible; soundness
never depends on the thresholds because certificates are always validated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .bitgraph import Cut, Graph, VertexSet, bits_of, mask_of
from .errors import BudgetExceededError, PreconditionError, VerificationError
from .families import ExtremalGraph
from .sampling import StreamRng
from .structures import LinearForest

EXACT_BUDGET = 24
ROTATION_RESTARTS = 32


@dataclass(frozen=True)
class HamCycleCert:
    order: tuple[int, ...]

    def validate(self, g: Graph, scope_mask: int | None = None) -> None:
        n = len(self.order)
        if n < 3:
            raise VerificationError("cycle certificate shorter than 3")
        if len(set(self.order)) != n:
            raise VerificationError("cycle certificate repeats a vertex")
        if scope_mask is not None and mask_of(self.order) != scope_mask:
            raise VerificationError("cycle certificate does not cover the scope")
        for i, u in enumerate(self.order):
            v = self.order[(i + 1) % n]
            if not g.has_edge(u, v):
                raise VerificationError(f"certificate uses non-edge ({u},{v})")


@dataclass(frozen=True)
class HamPathCert:
    order: tuple[int, ...]

    def validate(self, g: Graph, scope_mask: int | None = None) -> None:
        n = len(self.order)
        if n < 2:
            raise VerificationError("path certificate shorter than 2")
        if len(set(self.order)) != n:
            raise VerificationError("path certificate repeats a vertex")
        if scope_mask is not None and mask_of(self.order) != scope_mask:
            raise VerificationError("path certificate does not cover the scope")
        for u, v in zip(self.order, self.order[1:]):
            if not g.has_edge(u, v):
                raise VerificationError(f"certificate uses non-edge ({u},{v})")


@dataclass(frozen=True)
class HamDecision:
    status: str  # 'hamiltonian' | 'not_hamiltonian' | 'unknown'
    cert: HamCycleCert | None
    method: str
    work: int

    def __post_init__(self) -> None:
        if self.status == "hamiltonian" and self.cert is None:
            raise VerificationError("hamiltonian decision lacks a certificate")


@dataclass(frozen=True)
class StabilityWitness:
    kind: str  # 'hamiltonian' | 'independent_set' | 'sparse_pair'
    cert: HamCycleCert | None = None
    set_a: VertexSet | None = None
    set_b: VertexSet | None = None


# ---------------------------------------------------------------------------
# exact decision
# ---------------------------------------------------------------------------


def _connected_within(g: Graph, mask: int) -> bool:
    start = mask & -mask
    comp = start
    frontier = start
    while frontier:
        nxt = 0
        for v in bits_of(frontier):
            nxt |= g.rows[v] & mask & ~comp
        comp |= nxt
        frontier = nxt
    return comp == mask


def is_hamiltonian_exact(g: Graph, scope: VertexSet) -> HamDecision:
    """Definitive decision on g[scope] by DP over (visited-set, endpoint).

    Paths are anchored at the lowest scope vertex; a certificate is
    backtracked when the final state closes to the anchor.  Budget: 24
    vertices.
    """
    if scope.size > EXACT_BUDGET:
        raise BudgetExceededError(
            f"exact Hamiltonicity budget: |scope|={scope.size} > {EXACT_BUDGET}"
        )
    smask = scope.mask
    s = scope.size
    if s < 3:
        return HamDecision("not_hamiltonian", None, "dp", 0)
    for v in bits_of(smask):
        if (g.rows[v] & smask).bit_count() < 2:
            return HamDecision("not_hamiltonian", None, "dp", 0)
    if not _connected_within(g, smask):
        return HamDecision("not_hamiltonian", None, "dp", 0)

    verts = scope.members()
    idx = {v: i for i, v in enumerate(verts)}
    adj = [0] * s
    for i, v in enumerate(verts):
        for u in bits_of(g.rows[v] & smask):
            adj[i] |= 1 << idx[u]
    nfree = s - 1
    full = (1 << nfree) - 1
    # reach[mask] = endpoints (as bits over locals 1..s-1, shifted by 1) of
    # anchor-rooted paths visiting exactly {anchor} + mask
    reach = [0] * (full + 1)
    for w in bits_of(adj[0] >> 1):
        reach[1 << w] = 1 << w
    work = 0
    for mask in range(1, full + 1):
        r = reach[mask]
        if not r:
            continue
        rest = ~mask & full
        ends = r
        while ends:
            low = ends & -ends
            ends ^= low
            last = low.bit_length() - 1
            ext = (adj[last + 1] >> 1) & rest
            work += 1
            while ext:
                wbit = ext & -ext
                ext ^= wbit
                reach[mask | wbit] |= wbit
    closers = reach[full] & (adj[0] >> 1)
    if not closers:
        return HamDecision("not_hamiltonian", None, "dp", work)
    # backtrack a certificate
    last = (closers & -closers).bit_length() - 1
    order_local = [last + 1]
    mask = full ^ (1 << last)
    while mask:
        cur = order_local[-1]
        prevs = reach[mask] & ((adj[cur] >> 1) & mask)
        if not prevs:
            raise VerificationError("DP backtrack failed (bug)")
        p = (prevs & -prevs).bit_length() - 1
        order_local.append(p + 1)
        mask ^= 1 << p
    order_local.append(0)
    order = tuple(verts[i] for i in reversed(order_local))
    cert = HamCycleCert(order)
    cert.validate(g, smask)
    return HamDecision("hamiltonian", cert, "dp", work)


# ---------------------------------------------------------------------------
# rotation-extension engine
# ---------------------------------------------------------------------------


def find_ham_cycle_rotation(
    g: Graph, scope: VertexSet, budget: int = 20000, seed: int = 0
) -> HamDecision:
    """Seeded rotation-extension search: hamiltonian-or-unknown, never a
    refusal.  Deterministic given seed; budget counts rotations across all
    restarts."""
    smask = scope.mask
    s = scope.size
    if s < 3:
        return HamDecision("unknown", None, "rotation", 0)
    verts = scope.members()
    rotations = 0
    per_restart = max(budget // ROTATION_RESTARTS, 4 * s)
    for restart in range(ROTATION_RESTARTS):
        if rotations >= budget:
            break
        rng = StreamRng(seed, restart)
        start = verts[rng.below(s)]
        path = [start]
        on_path = 1 << start
        spent = 0
        while spent < per_restart and rotations < budget:
            end = path[-1]
            ext = g.rows[end] & smask & ~on_path
            if ext:
                opts = list(bits_of(ext))
                v = opts[rng.below(len(opts))]
                path.append(v)
                on_path |= 1 << v
                continue
            if on_path == smask and g.has_edge(end, path[0]):
                cert = HamCycleCert(tuple(path))
                cert.validate(g, smask)
                return HamDecision("hamiltonian", cert, "rotation", rotations)
            if len(path) < 3:
                break
            # rotate: pick a path neighbor of the endpoint, reverse the tail
            nbrs = g.rows[end] & on_path & ~(1 << path[-2]) & ~(1 << end)
            opts = [i for i in range(len(path) - 2) if nbrs >> path[i] & 1]
            if not opts:
                break
            i = opts[rng.below(len(opts))]
            path[i + 1 :] = reversed(path[i + 1 :])
            rotations += 1
            spent += 1
    return HamDecision("unknown", None, "rotation", rotations)


def decide_hamiltonian_auto(
    g: Graph, scope: VertexSet, seed: int = 0, budget: int = 20000
) -> HamDecision:
    """Tiered policy: tiny scopes straight to DP, larger ones try rotation
    first and fall back to DP while it stays within budget; beyond 24
    vertices an unsuccessful rotation search stays unknown."""
    if scope.size < 3:
        return HamDecision("not_hamiltonian", None, "auto", 0)
    if scope.size <= 16:
        return is_hamiltonian_exact(g, scope)
    dec = find_ham_cycle_rotation(g, scope, budget=budget, seed=seed)
    if dec.status == "hamiltonian":
        return dec
    if scope.size <= EXACT_BUDGET:
        return is_hamiltonian_exact(g, scope)
    return dec


# ---------------------------------------------------------------------------
# constructive builders (dense regimes)
# ---------------------------------------------------------------------------


def _cycle_in_scope(
    g: Graph, scope_mask: int, seed: int, budget: int | None = None
) -> list[int]:
    """Hamilton cycle of g[scope] via rotation, exact fallback when small."""
    size = scope_mask.bit_count()
    scope = VertexSet(scope_mask, g.m)
    budget = budget if budget is not None else max(20000, 200 * size)
    dec = find_ham_cycle_rotation(g, scope, budget=budget, seed=seed)
    if dec.status != "hamiltonian" and size <= EXACT_BUDGET:
        dec = is_hamiltonian_exact(g, scope)
    if dec.status != "hamiltonian":
        raise BudgetExceededError(
            f"cycle engine gave up on a {size}-vertex scope (work {dec.work})"
        )
    return list(dec.cert.order)


def _dirac_path_scoped(
    g: Graph, scope_mask: int, a: int, b: int, seed: int = 0
) -> list[int]:
    """Hamilton path of g[scope] from a to b under the Dirac-plus-one bound.

    Deletes a and b, finds a Hamilton cycle of the rest, then splices at a
    cycle edge x-y with a~x and b~y, which the degree counting guarantees.
    """
    size = scope_mask.bit_count()
    if a == b:
        raise PreconditionError("endpoints must differ")
    if not (scope_mask >> a & 1 and scope_mask >> b & 1):
        raise PreconditionError("endpoints must lie in the scope")
    mindeg = min((g.rows[v] & scope_mask).bit_count() for v in bits_of(scope_mask))
    if 2 * mindeg < size + 2:
        raise PreconditionError(
            f"need min degree >= m/2 + 1 in the scope (have {mindeg}, m={size})"
        )
    if size == 2:
        raise PreconditionError("scope too small")
    if size == 3:
        mid = next(bits_of(scope_mask & ~(1 << a) & ~(1 << b)))
        path = [a, mid, b]
        HamPathCert(tuple(path)).validate(g, scope_mask)
        return path
    rest = scope_mask & ~(1 << a) & ~(1 << b)
    cyc = _cycle_in_scope(g, rest, seed)
    k = len(cyc)
    for i in range(k):
        x, y = cyc[i], cyc[(i + 1) % k]
        if g.has_edge(a, x) and g.has_edge(b, y):
            # walk backwards from x around to y
            mid = [cyc[(i - j) % k] for j in range(k)]
            path = [a] + mid + [b]
            HamPathCert(tuple(path)).validate(g, scope_mask)
            return path
    raise VerificationError("pigeonhole splice found no cycle edge (out of regime)")


def ham_path_dirac(g: Graph, a: int, b: int, seed: int = 0) -> HamPathCert:
    """Hamilton path between any two vertices when min degree >= m/2 + 1."""
    path = _dirac_path_scoped(g, g.full_mask(), a, b, seed)
    return HamPathCert(tuple(path))


def _bipartite_path_scoped(
    g: Graph, lmask: int, rmask: int, a: int, b: int, seed: int = 0
) -> list[int]:
    """Hamilton path a..b of the crossing graph on lmask|rmask, with
    |left| = |right|, a on the left, b on the right, crossing min degree
    >= m/4 + 1.  Within-side edges are ignored."""
    if lmask & rmask:
        raise PreconditionError("sides overlap")
    nl, nr = lmask.bit_count(), rmask.bit_count()
    if nl != nr:
        raise PreconditionError(f"sides must balance (|L|={nl}, |R|={nr})")
    if not lmask >> a & 1:
        raise PreconditionError("a must be on the left side")
    if not rmask >> b & 1:
        raise PreconditionError("b must be on the right side")
    m = nl + nr
    scope_mask = lmask | rmask
    for v in bits_of(lmask):
        if 4 * (g.rows[v] & rmask).bit_count() < m + 4:
            raise PreconditionError(f"crossing degree of {v} below m/4 + 1")
    for v in bits_of(rmask):
        if 4 * (g.rows[v] & lmask).bit_count() < m + 4:
            raise PreconditionError(f"crossing degree of {v} below m/4 + 1")
    cross = _crossing_graph(g, lmask, rmask)
    if nl == 2:
        # remainder is a single crossing edge; wire directly
        r2 = next(bits_of(rmask & ~(1 << b)))
        l2 = next(bits_of(lmask & ~(1 << a)))
        path = [a, r2, l2, b]
        HamPathCert(tuple(path)).validate(cross, scope_mask)
        return path
    rest = scope_mask & ~(1 << a) & ~(1 << b)
    cyc = _cycle_in_scope(cross, rest, seed)
    k = len(cyc)
    pos = {v: i for i, v in enumerate(cyc)}
    # successor pigeonhole: some v ~ a has its successor ~ b
    for v in bits_of(cross.rows[a] & rest):
        w = cyc[(pos[v] + 1) % k]
        if cross.has_edge(b, w):
            i = pos[v]
            mid = [cyc[(i - j) % k] for j in range(k)]
            path = [a] + mid + [b]
            HamPathCert(tuple(path)).validate(cross, scope_mask)
            return path
    raise VerificationError("successor sets failed to intersect (out of regime)")


def _crossing_graph(g: Graph, lmask: int, rmask: int) -> Graph:
    rows = []
    for v in range(g.m):
        if lmask >> v & 1:
            rows.append(g.rows[v] & rmask)
        elif rmask >> v & 1:
            rows.append(g.rows[v] & lmask)
        else:
            rows.append(0)
    return Graph(g.m, tuple(rows))


def ham_path_bipartite(
    g: Graph, left: VertexSet, right: VertexSet, a: int, b: int, seed: int = 0
) -> HamPathCert:
    """Hamilton path from a (left) to b (right) of the crossing graph when
    the sides balance and every crossing degree is >= m/4 + 1."""
    path = _bipartite_path_scoped(g, left.mask, right.mask, a, b, seed)
    return HamPathCert(tuple(path))


def _two_lowest(mask: int) -> tuple[int, int]:
    it = bits_of(mask)
    return next(it), next(it)


def _dense_side_path(
    g: Graph,
    side_mask: int,
    s: int,
    t: int,
    low_threshold: Fraction,
    seed: int,
) -> list[int]:
    """Hamilton path s..t of g[side] in the dense-side regime.

    Vertices of side-degree <= low_threshold * g.m are covered first by
    pendant arms (at s, t) and cherries, the pieces are chained through
    common neighbors, and the dense remainder is finished by the Dirac path
    routine.
    """
    m = g.m
    low = 0
    for v in bits_of(side_mask):
        if (g.rows[v] & side_mask).bit_count() <= low_threshold * m:
            low |= 1 << v
    high = side_mask & ~low
    used = (1 << s) | (1 << t)

    def take_lowest(mask: int, who: str) -> int:
        if not mask:
            raise VerificationError(f"cherry/arm selection stuck at {who}")
        v = next(bits_of(mask))
        nonlocal used
        used |= 1 << v
        return v

    piece = [s]
    if low >> s & 1:
        piece.append(take_lowest(g.rows[s] & high & ~used, f"arm of {s}"))
    tail = [t]
    if low >> t & 1:
        tail.insert(0, take_lowest(g.rows[t] & high & ~used, f"arm of {t}"))
    cherries = []
    for v in bits_of(low & ~(1 << s) & ~(1 << t)):
        used |= 1 << v
        x = take_lowest(g.rows[v] & high & ~used, f"cherry of {v}")
        y = take_lowest(g.rows[v] & high & ~used, f"cherry of {v}")
        cherries.append([x, v, y])
    for ch in cherries:
        end = piece[-1]
        z = g.rows[end] & g.rows[ch[0]] & high & ~used
        if z:
            piece.extend([take_lowest(z, f"join {end}-{ch[0]}")] + ch)
            continue
        z = g.rows[end] & g.rows[ch[2]] & high & ~used
        if not z:
            raise VerificationError(f"merge failure at endpoints ({end}, {ch[0]})")
        piece.extend([take_lowest(z, f"join {end}-{ch[2]}")] + ch[::-1])
    # finish through the dense remainder with a Dirac path
    pmask = mask_of(piece)
    tmask = mask_of(tail)
    rest = side_mask & ~pmask & ~tmask
    if not rest:
        path = piece if piece[-1] == t else piece + tail
        if mask_of(path) != side_mask:
            raise VerificationError("side path missed vertices (out of regime)")
        HamPathCert(tuple(path)).validate(g, side_mask)
        return path
    end = piece[-1]
    r1 = g.rows[end] & rest
    if not r1:
        raise VerificationError(f"merge failure at endpoints ({end}, remainder)")
    r1v = next(bits_of(r1))
    head = tail[0]
    r2 = g.rows[head] & rest & ~(1 << r1v)
    if not r2:
        raise VerificationError(f"merge failure at endpoints ({head}, remainder)")
    r2v = next(bits_of(r2))
    mid = _dirac_path_scoped(g, rest, r1v, r2v, seed)
    path = piece + mid + tail
    HamPathCert(tuple(path)).validate(g, side_mask)
    return path


def ham_cycle_two_cliques(
    g: Graph,
    cut: Cut,
    low_threshold: Fraction = Fraction(3, 10),
    seed: int = 0,
) -> HamCycleCert:
    """Hamilton cycle when both cut sides are near-cliques joined by at
    least two disjoint crossing edges.

    Regime: both sides >= 0.49m, inside min degree >= m/100, inside
    non-edges <= m^2/10^4.  Each side gets a Hamilton path between the
    crossing endpoints (low-degree vertices first via cherries, dense rest
    via the Dirac routine); the two paths and the two crossing edges close
    the cycle.
    """
    m = g.m
    xmask, ymask = cut.x.mask, cut.y.mask
    for name, side in (("X", xmask), ("Y", ymask)):
        size = side.bit_count()
        if 100 * size < 49 * m:
            raise PreconditionError(f"side {name} smaller than 0.49m")
        mindeg = min((g.rows[v] & side).bit_count() for v in bits_of(side))
        if 100 * mindeg < m:
            raise PreconditionError(f"inside min degree of {name} below m/100")
        non = g.non_edges_inside(side)
        if 10**4 * non > m * m:
            raise PreconditionError(f"side {name} has too many inside non-edges")
    # two disjoint crossing edges, lexicographically first
    a1 = b1 = a2 = b2 = -1
    for u in bits_of(xmask):
        c = g.rows[u] & ymask
        if c:
            a1, b1 = u, next(bits_of(c))
            break
    if a1 >= 0:
        for u in bits_of(xmask & ~(1 << a1)):
            c = g.rows[u] & ymask & ~(1 << b1)
            if c:
                a2, b2 = u, next(bits_of(c))
                break
    if a2 < 0:
        raise PreconditionError("need two disjoint crossing edges")
    px = _dense_side_path(g, xmask, a1, a2, low_threshold, seed)
    py = _dense_side_path(g, ymask, b2, b1, low_threshold, seed + 1)
    cert = HamCycleCert(tuple(px + py))
    cert.validate(g, g.full_mask())
    return cert


def ham_cycle_near_bipartite(
    g: Graph,
    cut: Cut,
    k_good_witness: LinearForest,
    eps: Fraction = Fraction(1, 100),
    gamma: Fraction = Fraction(3, 10),
    low_threshold: Fraction = Fraction(1, 5),
    seed: int = 0,
) -> HamCycleCert:
    """Hamilton cycle for a near-balanced cut with dense crossing graph.

    The witness must be a linear forest inside the larger side X with
    exactly |X| - |Y| edges; its paths supply the within-side edges of the
    cycle.  Low-crossing-degree vertices are wrapped in cherries or pendant
    arms, all pieces are chained by crossing-only connectors of length 2 or
    3, and the balanced remainder is closed through the bipartite path
    routine.
    """
    m = g.m
    amask, bmask = cut.x.mask, cut.y.mask
    na, nb = amask.bit_count(), bmask.bit_count()
    if na < nb:
        raise PreconditionError("X must be the larger (or equal) side")
    if na > nb + eps * m:
        raise PreconditionError(f"imbalance {na - nb} exceeds eps*m")
    f = na - nb
    crossing = g.edges_between(amask, bmask)
    if 4 * crossing < (1 - 4 * eps) * m * m:
        raise PreconditionError("crossing graph too sparse")
    for v in bits_of(amask):
        if (g.rows[v] & bmask).bit_count() * 3 < gamma * m:
            raise PreconditionError(f"crossing degree of {v} below gamma*m/3")
    for v in bits_of(bmask):
        if (g.rows[v] & amask).bit_count() * 3 < gamma * m:
            raise PreconditionError(f"crossing degree of {v} below gamma*m/3")
    k_good_witness.validate(g, amask)
    if k_good_witness.size != f:
        raise PreconditionError(
            f"witness must have exactly |X|-|Y| = {f} edges, has {k_good_witness.size}"
        )

    low_a = 0
    for v in bits_of(amask):
        if (g.rows[v] & bmask).bit_count() <= low_threshold * m:
            low_a |= 1 << v
    low_b = 0
    for v in bits_of(bmask):
        if (g.rows[v] & amask).bit_count() <= low_threshold * m:
            low_b |= 1 << v
    high_a, high_b = amask & ~low_a, bmask & ~low_b
    used = 0

    def grab(mask: int, who: str) -> int:
        nonlocal used
        if not mask:
            raise VerificationError(f"merge failure at endpoints ({who})")
        v = next(bits_of(mask))
        used |= 1 << v
        return v

    pieces: list[list[int]] = []
    fmask = k_good_witness.vertex_mask()
    used |= fmask
    for path in k_good_witness.paths():
        p, q = path[0], path[-1]
        piece = list(path)
        if low_a >> p & 1:
            piece.insert(0, grab(g.rows[p] & high_b & ~used, f"arm of {p}"))
        if low_a >> q & 1:
            piece.append(grab(g.rows[q] & high_b & ~used, f"arm of {q}"))
        pieces.append(piece)
    for v in bits_of((low_a | low_b) & ~fmask):
        used |= 1 << v
        other_high = high_b if amask >> v & 1 else high_a
        x = grab(g.rows[v] & other_high & ~used, f"cherry of {v}")
        y = grab(g.rows[v] & other_high & ~used, f"cherry of {v}")
        pieces.append([x, v, y])

    def side_of(v: int) -> int:
        return 0 if amask >> v & 1 else 1

    if not pieces:
        a0 = next(bits_of(high_a))
        b0 = grab(g.rows[a0] & high_b, f"partner of {a0}")
        used |= 1 << a0
        path = [a0, b0]
    else:
        path = pieces[0]
        for nxt in pieces[1:]:
            end = path[-1]
            attached = False
            for cand in (nxt, nxt[::-1]):
                w = cand[0]
                free = ~used & (amask | bmask)
                if side_of(end) == side_of(w):
                    # length-2 connector through the opposite side
                    zpool = g.rows[end] & g.rows[w] & free
                    zpool_high = zpool & (high_a | high_b)
                    z = zpool_high or zpool
                    if z:
                        path = path + [grab(z, f"connector {end}-{w}")] + cand
                        attached = True
                        break
                else:
                    # length-3 connector: end - z - z2 - w, crossing only
                    z2pool = g.rows[w] & free & (high_a | high_b)
                    found = False
                    for z2 in bits_of(z2pool):
                        zpool = g.rows[end] & g.rows[z2] & free & ~(1 << z2)
                        zpool &= bmask if side_of(end) == 0 else amask
                        if zpool:
                            z = grab(zpool, f"connector {end}-{w}")
                            used |= 1 << z2
                            path = path + [z, z2] + cand
                            found = True
                            break
                    if found:
                        attached = True
                        break
            if not attached:
                raise VerificationError(
                    f"merge failure at endpoints ({path[-1]}, {nxt[0]})"
                )
    # force the chain to end on opposite sides
    if side_of(path[0]) == side_of(path[-1]):
        other_high = high_b if side_of(path[-1]) == 0 else high_a
        path.append(grab(g.rows[path[-1]] & other_high & ~used, "side-fix arm"))
    used = mask_of(path)
    a_end = path[0] if side_of(path[0]) == 0 else path[-1]
    b_end = path[-1] if a_end == path[0] else path[0]
    if path[0] != a_end:
        path = path[::-1]
    rest_a = amask & ~used
    rest_b = bmask & ~used
    if rest_a.bit_count() != rest_b.bit_count():
        raise VerificationError("remainder sides unbalanced (bug)")
    if not rest_a:
        cert = HamCycleCert(tuple(path))
        cert.validate(g, g.full_mask())
        return cert
    x = next(bits_of(g.rows[b_end] & rest_a), -1)
    y = next(bits_of(g.rows[a_end] & rest_b), -1)
    if x < 0 or y < 0:
        raise VerificationError("merge failure at endpoints (remainder hookup)")
    mid = _bipartite_path_scoped(g, rest_a, rest_b, x, y, seed)
    cert = HamCycleCert(tuple(path + mid))
    cert.validate(g, g.full_mask())
    return cert


# ---------------------------------------------------------------------------
# extremal-family criterion and stability witness
# ---------------------------------------------------------------------------


def gn_criterion(eg: ExtremalGraph, s: VertexSet) -> bool:
    """Exact cyclic-subset test for members of the extremal family,
    O(#cycles) per call.

    With T = A-part survivors and d = |T| - |B-part survivors|: subsets
    smaller than 3 fail; B-free subsets succeed exactly when T is the whole
    vertex set of a single 2-factor cycle; otherwise success means d >= 0
    and the 2-factor edges induced on T (capped at len-1 for a fully chosen
    cycle) number at least d.
    """
    smask = s.mask
    if smask & ~eg.graph.full_mask():
        raise PreconditionError("subset leaves the graph")
    if smask.bit_count() < 3:
        return False
    t = smask & eg.part_a.mask
    bcount = (smask & eg.part_b.mask).bit_count()
    if bcount == 0:
        return any(t == mask_of(c) for c in eg.cycles)
    d = t.bit_count() - bcount
    if d < 0:
        return False
    if d == 0:
        return True
    maxlf = 0
    for lo, ell in eg.cycle_spans():
        bits = (t >> lo) & ((1 << ell) - 1)
        if not bits:
            continue
        rot = (bits >> 1) | ((bits & 1) << (ell - 1))
        e = (bits & rot).bit_count()
        if bits == (1 << ell) - 1:
            e = ell - 1
        maxlf += e
        if maxlf >= d:
            return True
    return maxlf >= d


def dirac_stability_witness(g: Graph, epsilon: Fraction) -> StabilityWitness:
    """For min degree >= (1/2-eps)m, m <= 18: either a Hamilton cycle, an
    independent set of size ceil((1/2-eps)m), or a disjoint sparse pair of
    that size with at most m crossing edges (exhaustive search)."""
    m = g.m
    if m > 18:
        raise BudgetExceededError(f"stability witness budget: m={m} > 18")
    bound = (Fraction(1, 2) - epsilon) * m
    if g.min_degree() < bound:
        raise PreconditionError("min degree below (1/2 - eps) * m")
    dec = is_hamiltonian_exact(g, VertexSet.full(m))
    if dec.status == "hamiltonian":
        return StabilityWitness("hamiltonian", cert=dec.cert)
    k = -((-bound.numerator) // bound.denominator)  # ceil
    for combo in combinations(range(m), k):
        cm = mask_of(combo)
        if all(not g.rows[v] & cm for v in combo):
            return StabilityWitness("independent_set", set_a=VertexSet(cm, m))
    for combo in combinations(range(m), k):
        cm = mask_of(combo)
        rest = [v for v in range(m) if not cm >> v & 1]
        for other in combinations(rest, k):
            om = mask_of(other)
            if g.edges_between(cm, om) <= m:
                return StabilityWitness(
                    "sparse_pair", set_a=VertexSet(cm, m), set_b=VertexSet(om, m)
                )
    raise VerificationError("no stability witness found (out of the regime)")
