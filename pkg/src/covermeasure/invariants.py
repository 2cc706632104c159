"""Geometric functionals on metric graphs and hyperbolic pants geometry.

The systole routine works on arbitrary connected metric multigraphs via
edge removal plus shortest paths.  The pants functions compute the length
of the simple orthogeodesic from one boundary to itself that separates
the other two boundaries, once by right-angled hexagon identities and
once by an explicit matrix model in PSL(2, R).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .graphs import InvalidGraphError, bridges_of_edges


class InfeasibleGeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# metric-graph functionals
# ---------------------------------------------------------------------------

def _shortest_path(adj, n, src, dst, skip_edge):
    """Dijkstra distance src -> dst ignoring edge ``skip_edge``; None if absent."""
    dist = [None] * n
    heap = [(0, src)]
    while heap:
        d, x = heapq.heappop(heap)
        if dist[x] is not None:
            continue
        dist[x] = d
        if x == dst:
            return d
        for y, w, eid in adj[x]:
            if eid != skip_edge and dist[y] is None:
                heapq.heappush(heap, (d + w, y))
    return None


def systole_from_lengths(edges: Sequence[tuple[int, int]], lengths: Sequence):
    """Length of the shortest cycle of a connected metric multigraph.

    Candidates are every loop, and for each non-loop edge e = (u, v) the
    value len(e) plus the shortest u-v path avoiding e.  Exact when the
    lengths are exact (Fractions survive untouched).
    """
    if len(edges) != len(lengths):
        raise InvalidGraphError("one length per edge required")
    if any(l <= 0 for l in lengths):
        raise InvalidGraphError("edge lengths must be positive")
    n = max(max(u, v) for u, v in edges) + 1
    if not _connected_for_systole(edges, n):
        raise InvalidGraphError("systole requires a connected graph")
    adj = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        if u != v:
            adj[u].append((v, lengths[i], i))
            adj[v].append((u, lengths[i], i))

    best = None
    for i, (u, v) in enumerate(edges):
        if u == v:
            cand = lengths[i]
        else:
            back = _shortest_path(adj, n, u, v, i)
            if back is None:
                continue
            cand = lengths[i] + back
        if best is None or cand < best:
            best = cand
    if best is None:
        raise InvalidGraphError("graph has no cycle")
    return best


def _connected_for_systole(edges, n):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def systole(mg):
    """Systole of a volume-one metric graph (see systole_from_lengths)."""
    return systole_from_lengths(mg.graph.edges, mg.lengths)


def separating_edge_indicator(mg) -> bool:
    """True iff the underlying graph has a separating (bridge) edge."""
    return bool(bridges_of_edges(mg.graph.edges, mg.graph.num_vertices))


def min_edge_length(mg):
    """Minimum edge length; the graph is l-long iff this exceeds l."""
    return min(mg.lengths)


# ---------------------------------------------------------------------------
# hyperbolic pants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PantsBoundary:
    """Boundary lengths of a hyperbolic pair of pants, all positive."""

    l1: float
    l2: float
    l3: float

    def __post_init__(self):
        if not (self.l1 > 0 and self.l2 > 0 and self.l3 > 0):
            raise InfeasibleGeometryError("boundary lengths must be positive")


def pants_boundary_from_dumbbell(x, y, z) -> PantsBoundary:
    """Boundary triple of the pants thickening a dumbbell with loop lengths
    x, y and bar length z, in the long-cover limit: (x, y, x + y + 2z)."""
    if x <= 0 or y <= 0 or z <= 0:
        raise InfeasibleGeometryError("dumbbell lengths must be positive")
    return PantsBoundary(x, y, x + y + 2 * z)


def separating_orthogeodesic_length(b: PantsBoundary) -> float:
    """Length of the simple orthogeodesic from boundary 3 to itself that
    separates boundaries 1 and 2.

    Cut the pants into two congruent right-angled hexagons along the three
    seams.  One hexagon identity gives the seam between boundaries 1 and 2,

        cosh(seam) = (cosh(l3/2) + cosh(l1/2) cosh(l2/2))
                     / (sinh(l1/2) sinh(l2/2)),

    and a second identity gives the perpendicular p dropped from the l3/2
    side onto that seam,

        cosh(p) = sinh(seam) sinh(l1/2) sinh(l2/2) / sinh(l3/2).

    The orthogeodesic doubles p across the seam.
    """
    h1, h2, h3 = b.l1 / 2, b.l2 / 2, b.l3 / 2
    s1, s2, s3 = math.sinh(h1), math.sinh(h2), math.sinh(h3)
    cosh_seam = (math.cosh(h3) + math.cosh(h1) * math.cosh(h2)) / (s1 * s2)
    sinh_seam = math.sqrt(cosh_seam * cosh_seam - 1.0)
    cosh_p = max(sinh_seam * s1 * s2 / s3, 1.0)
    return 2.0 * math.acosh(cosh_p)


# --- independent matrix-model oracle ---------------------------------------

def _mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def trace(m) -> float:
    return m[0][0] + m[1][1]


def translation_length(m) -> float:
    """Translation length of a hyperbolic isometry given as an SL(2,R) matrix."""
    t = abs(trace(m))
    if t <= 2.0:
        raise InfeasibleGeometryError(f"matrix with |trace| = {t} is not hyperbolic")
    return 2.0 * math.acosh(t / 2.0)


def _axis_endpoints(m):
    (p, q), (r, s) = m
    disc = (p + s) ** 2 - 4.0
    if disc <= 0:
        raise InfeasibleGeometryError("matrix is not hyperbolic, no axis")
    if abs(r) < 1e-14:
        if abs(s - p) < 1e-14:
            raise InfeasibleGeometryError("degenerate axis")
        return (q / (s - p), math.inf)
    root = math.sqrt(disc)
    return ((p - s + root) / (2 * r), (p - s - root) / (2 * r))


def _dist_between_axes(e1, e2) -> float:
    u, v = e1

    def mob(z):
        if v is math.inf:
            return z - u
        if z is math.inf:
            return 1.0
        return (z - u) / (z - v)

    pp, qq = mob(e2[0]), mob(e2[1])
    m = (pp + qq) / 2.0
    r = abs(pp - qq) / 2.0
    if abs(m) <= r:
        raise InfeasibleGeometryError("axes intersect; no common perpendicular")
    return math.acosh(abs(m) / r)


def pants_group_generators(b: PantsBoundary):
    """Explicit A, B in SL(2,R) with translation lengths l1, l2 and with
    tr(AB) = -2 cosh(l3/2); that sign makes <A, B> a pants group."""
    lam = math.exp(b.l1 / 2)
    t_b = 2.0 * math.cosh(b.l2 / 2)
    t_ab = -2.0 * math.cosh(b.l3 / 2)
    a_mat = ((lam, 0.0), (0.0, 1.0 / lam))
    p = (t_ab - t_b / lam) / (lam - 1.0 / lam)
    s = t_b - p
    q = p * s - 1.0
    if abs(q) < 1e-14:
        raise InfeasibleGeometryError("failed to realize the trace conditions")
    b_mat = ((p, q), (1.0, s))
    return a_mat, b_mat


def matrix_pants_oracle(b: PantsBoundary) -> float:
    """Separating orthogeodesic length computed without hexagon identities.

    Builds A, B realizing the boundary traces, then measures the common
    perpendicular between the axis of AB and the axis of BA; both project
    to boundary 3 and the perpendicular projects to the orthogeodesic.
    """
    a_mat, b_mat = pants_group_generators(b)
    ab = _mat_mul(a_mat, b_mat)
    ba = _mat_mul(b_mat, a_mat)
    return _dist_between_axes(_axis_endpoints(ab), _axis_endpoints(ba))
