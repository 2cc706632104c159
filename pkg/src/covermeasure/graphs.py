"""Connected trivalent multigraphs: enumeration, automorphisms, canonical forms.

A graph of rank k has V = 2k-2 vertices and E = 3k-3 edges; loops and
parallel edges are allowed.  Edges are stored as sorted vertex pairs; the
dart structure (two darts per edge) is derived from the edge list, with
darts 2i and 2i+1 belonging to edge i.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product

DEFAULT_MAX_RANK = 6
_MAX_RANK_ENV = "COVERMEASURE_MAX_RANK"


class InvalidRankError(ValueError):
    pass


class InvalidGraphError(ValueError):
    pass


@dataclass(frozen=True)
class TrivalentGraph:
    """Connected multigraph with every vertex of degree 3 (loops count twice).

    ``edges`` is a tuple of sorted pairs (u, v) with u <= v; a loop has
    u == v.  Vertices are 0..V-1.
    """

    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if not edges:
            raise InvalidGraphError("empty edge list")
        if any(len(e) != 2 or e[0] > e[1] or e[0] < 0 for e in edges):
            raise InvalidGraphError("edges must be sorted pairs (u, v) with 0 <= u <= v")
        n = self.num_vertices
        deg = [0] * n
        for u, v in edges:
            if u >= n or v >= n:
                raise InvalidGraphError("vertex index out of range")
            deg[u] += 1
            deg[v] += 1
        if any(d != 3 for d in deg):
            raise InvalidGraphError("every vertex must have degree exactly 3")
        if len(edges) % 3 != 0 or self.num_edges != 3 * self.rank - 3:
            raise InvalidGraphError("edge count incompatible with a trivalent graph")
        if not _is_connected(edges, n):
            raise InvalidGraphError("graph must be connected")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        # sum of degrees is 2E = 3V
        return (2 * len(self.edges)) // 3

    @property
    def rank(self) -> int:
        """Rank k of the free fundamental group; Euler characteristic is 1 - k."""
        return self.num_edges // 3 + 1

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges

    @property
    def darts(self) -> tuple[int, ...]:
        return tuple(range(2 * self.num_edges))

    @property
    def edge_pairing(self) -> tuple[int, ...]:
        """Fixed-point-free involution on darts: dart 2i <-> dart 2i+1."""
        pairing = []
        for i in range(self.num_edges):
            pairing.extend((2 * i + 1, 2 * i))
        return tuple(pairing)

    @property
    def vertex_of_dart(self) -> tuple[int, ...]:
        out = []
        for u, v in self.edges:
            out.extend((u, v))
        return tuple(out)

    @property
    def vertex_assignment(self) -> tuple[tuple[int, ...], ...]:
        """Darts grouped by vertex; each group has exactly 3 darts."""
        groups: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for d, v in enumerate(self.vertex_of_dart):
            groups[v].append(d)
        return tuple(tuple(g) for g in groups)

    def multiplicity(self, u: int, v: int) -> int:
        u, v = min(u, v), max(u, v)
        return sum(1 for e in self.edges if e == (u, v))

    def loops_at(self, v: int) -> int:
        return sum(1 for e in self.edges if e == (v, v))

    def canonical_form(self) -> bytes:
        return canonical_form(self)

    def canonical_id(self) -> str:
        return canonical_form(self).hex()


def _is_connected(edges, n) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == n


# ---------------------------------------------------------------------------
# canonical labeling
# ---------------------------------------------------------------------------

def _min_code(edges, n):
    """Lexicographically minimal level code over all vertex labelings.

    Entry i lists, in sorted order, the smaller endpoints of all edges whose
    larger endpoint is i (a loop at i contributes i itself).  Backtracking
    with prefix pruning; graphs here have at most 10 vertices.
    """
    mult = [[0] * n for _ in range(n)]
    for u, v in edges:
        mult[u][v] += 1
        if u != v:
            mult[v][u] += 1

    best: list[tuple[tuple[int, ...], ...] | None] = [None]

    def entry(x, assigned_new, level):
        ent = [level] * mult[x][x]
        for old, new in assigned_new.items():
            ent.extend([new] * mult[x][old])
        ent.sort()
        return tuple(ent)

    def rec(assigned_new, prefix):
        level = len(prefix)
        if level == n:
            t = tuple(prefix)
            if best[0] is None or t < best[0]:
                best[0] = t
            return
        cands = sorted(
            (entry(x, assigned_new, level), x)
            for x in range(n) if x not in assigned_new
        )
        for ent, x in cands:
            if best[0] is not None and tuple(prefix) + (ent,) > best[0][:level + 1]:
                break  # candidates are sorted: nothing further can beat best
            assigned_new[x] = level
            prefix.append(ent)
            rec(assigned_new, prefix)
            prefix.pop()
            del assigned_new[x]

    rec({}, [])
    return best[0]


def _edges_from_code(code):
    edges = []
    for i, ent in enumerate(code):
        for j in ent:
            edges.append((j, i))
    return tuple(sorted(edges))


def canonical_form(graph: TrivalentGraph) -> bytes:
    """Canonical byte string: isomorphic graphs map to the same value.

    Layout: rank, V, E, then the canonically relabeled edge list as byte
    pairs.  Only graphs with fewer than 256 vertices are supported.
    """
    code = _min_code(graph.edges, graph.num_vertices)
    edges = _edges_from_code(code)
    out = bytearray((graph.rank, graph.num_vertices, graph.num_edges))
    for u, v in edges:
        out.extend((u, v))
    return bytes(out)


def canonical_graph(graph: TrivalentGraph) -> TrivalentGraph:
    """The canonical representative of the isomorphism class of ``graph``."""
    code = _min_code(graph.edges, graph.num_vertices)
    return TrivalentGraph(_edges_from_code(code))


def graph_from_canonical_form(blob: bytes) -> TrivalentGraph:
    if len(blob) < 3:
        raise InvalidGraphError("canonical form too short")
    rank, n_vertices, n_edges = blob[0], blob[1], blob[2]
    if len(blob) != 3 + 2 * n_edges:
        raise InvalidGraphError("canonical form has wrong length")
    edges = tuple(
        (blob[3 + 2 * i], blob[4 + 2 * i]) for i in range(n_edges)
    )
    g = TrivalentGraph(tuple(sorted(tuple(sorted(e)) for e in edges)))
    if g.rank != rank or g.num_vertices != n_vertices:
        raise InvalidGraphError("inconsistent canonical form header")
    return canonical_graph(g)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _candidate_edge_lists(n):
    """Connected cubic multigraphs on n vertices, in first-seen labelings.

    The active vertex is always the lowest one with remaining degree; while
    it stays active its targets are chosen in non-decreasing order, and a
    previously untouched target must be the lowest untouched index.  Every
    isomorphism class shows up (possibly several times); classes are
    separated afterwards by canonical form.
    """
    out = []
    rem = [3] * n
    edges: list[tuple[int, int]] = []

    def rec(last_active, last_floor):
        v = next((i for i in range(n) if rem[i] > 0), None)
        if v is None:
            out.append(tuple(edges))
            return
        if rem[v] == 3 and v > 0:
            return  # the component built so far is closed: disconnected
        floor = last_floor if v == last_active else v
        first_fresh = next((u for u in range(v + 1, n) if rem[u] == 3), None)
        for u in range(floor, n):
            if u == v:
                if rem[v] >= 2:
                    rem[v] -= 2
                    edges.append((v, v))
                    rec(v, v)
                    edges.pop()
                    rem[v] += 2
                continue
            if rem[u] == 0:
                continue
            if rem[u] == 3 and u != first_fresh:
                continue
            rem[v] -= 1
            rem[u] -= 1
            edges.append((v, u))
            rec(v, u)
            edges.pop()
            rem[v] += 1
            rem[u] += 1

    rec(0, 0)
    return out


def max_enumeration_rank() -> int:
    raw = os.environ.get(_MAX_RANK_ENV, "")
    try:
        return int(raw) if raw else DEFAULT_MAX_RANK
    except ValueError:
        return DEFAULT_MAX_RANK


@lru_cache(maxsize=None)
def _enumerate(k: int) -> tuple[TrivalentGraph, ...]:
    n = 2 * k - 2
    seen: dict[tuple, TrivalentGraph] = {}
    for cand in _candidate_edge_lists(n):
        code = _min_code(cand, n)
        if code not in seen:
            seen[code] = TrivalentGraph(_edges_from_code(code))
    return tuple(seen[c] for c in sorted(seen))


def enumerate_trivalent(k: int) -> tuple[TrivalentGraph, ...]:
    """All connected trivalent multigraphs of rank k, one per homeomorphism
    class, in canonical order.

    The rank is capped by the COVERMEASURE_MAX_RANK environment variable
    (default 6); exhaustive canonicalization gets slow beyond that.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise InvalidRankError(f"rank must be an integer >= 2, got {k!r}")
    cap = max_enumeration_rank()
    if k > cap:
        raise InvalidRankError(
            f"rank {k} exceeds the enumeration cap {cap} "
            f"(set {_MAX_RANK_ENV} to raise it)"
        )
    return _enumerate(k)


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphAutomorphism:
    """Dart-level symmetry: commutes with the edge pairing and maps vertex
    dart-triples to vertex dart-triples.  Loop reversal is nontrivial here."""

    dart_permutation: tuple[int, ...]

    @property
    def edge_permutation(self) -> tuple[int, ...]:
        return tuple(self.dart_permutation[2 * i] // 2
                     for i in range(len(self.dart_permutation) // 2))

    def is_edge_trivial(self) -> bool:
        perm = self.edge_permutation
        return all(p == i for i, p in enumerate(perm))


def compose(a: GraphAutomorphism, b: GraphAutomorphism) -> GraphAutomorphism:
    """a after b on darts."""
    return GraphAutomorphism(tuple(a.dart_permutation[d] for d in b.dart_permutation))


def identity_automorphism(graph: TrivalentGraph) -> GraphAutomorphism:
    return GraphAutomorphism(tuple(range(2 * graph.num_edges)))


def _vertex_bijections(graph: TrivalentGraph):
    """Adjacency-compatible vertex bijections, by backtracking."""
    n = graph.num_vertices
    mult = [[0] * n for _ in range(n)]
    loops = [0] * n
    for u, v in graph.edges:
        if u == v:
            loops[u] += 1
        else:
            mult[u][v] += 1
            mult[v][u] += 1
    out = []
    image = [-1] * n
    used = [False] * n

    def rec(u):
        if u == n:
            out.append(tuple(image))
            return
        for w in range(n):
            if used[w] or loops[w] != loops[u]:
                continue
            ok = True
            for x in range(u):
                if mult[u][x] != mult[w][image[x]]:
                    ok = False
                    break
            if not ok:
                continue
            image[u] = w
            used[w] = True
            rec(u + 1)
            used[w] = False
            image[u] = -1

    rec(0)
    return out


def automorphism_group(graph: TrivalentGraph) -> tuple[GraphAutomorphism, ...]:
    """The full automorphism group as dart permutations.

    Each adjacency-compatible vertex bijection lifts to dart level by
    choosing a matching of parallel-edge bundles and an orientation for
    every loop; all lifts are enumerated.
    """
    edges = graph.edges
    n_edges = len(edges)
    bundles: dict[tuple[int, int], list[int]] = {}
    for i, e in enumerate(edges):
        bundles.setdefault(e, []).append(i)
    keys = sorted(bundles)
    auts = []
    for sigma in _vertex_bijections(graph):
        per_bundle = []
        ok = True
        for key in keys:
            u, v = key
            tgt = (min(sigma[u], sigma[v]), max(sigma[u], sigma[v]))
            if tgt not in bundles or len(bundles[tgt]) != len(bundles[key]):
                ok = False
                break
            per_bundle.append((key, bundles[key], bundles[tgt]))
        if not ok:
            continue
        matchings = [list(permutations(tg)) for _, _, tg in per_bundle]
        for assignment in product(*matchings):
            base_perm = [-1] * (2 * n_edges)
            loop_edge_images = []  # (src_edge, dst_edge) for loops
            for (key, src, _tgt), images in zip(per_bundle, assignment):
                u, v = key
                for e_id, f_id in zip(src, images):
                    if u == v:
                        loop_edge_images.append((e_id, f_id))
                    else:
                        c, d = edges[f_id]
                        if sigma[u] == c:
                            base_perm[2 * e_id] = 2 * f_id
                            base_perm[2 * e_id + 1] = 2 * f_id + 1
                        else:
                            base_perm[2 * e_id] = 2 * f_id + 1
                            base_perm[2 * e_id + 1] = 2 * f_id
            for flips in product((0, 1), repeat=len(loop_edge_images)):
                perm = list(base_perm)
                for (e_id, f_id), flip in zip(loop_edge_images, flips):
                    if flip:
                        perm[2 * e_id] = 2 * f_id + 1
                        perm[2 * e_id + 1] = 2 * f_id
                    else:
                        perm[2 * e_id] = 2 * f_id
                        perm[2 * e_id + 1] = 2 * f_id + 1
                auts.append(GraphAutomorphism(tuple(perm)))
    return tuple(sorted(auts, key=lambda a: a.dart_permutation))


def triv_subgroup(graph: TrivalentGraph) -> tuple[GraphAutomorphism, ...]:
    """Automorphisms acting trivially on edge lengths (edge reversals allowed)."""
    return tuple(a for a in automorphism_group(graph) if a.is_edge_trivial())


def edge_action(graph: TrivalentGraph) -> tuple[tuple[int, ...], ...]:
    """Image of the automorphism group on edges, as a set of permutations."""
    perms = {a.edge_permutation for a in automorphism_group(graph)}
    return tuple(sorted(perms))


# ---------------------------------------------------------------------------
# bridges and cycles
# ---------------------------------------------------------------------------

def bridges_of_edges(edges, n) -> frozenset[int]:
    """Indices of edges whose removal disconnects the graph.  Loops never
    qualify; parallel edges cover for each other."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        if u == v:
            continue
        adj[u].append((v, i))
        adj[v].append((u, i))
    disc = [-1] * n
    low = [0] * n
    out = set()
    counter = [0]

    def dfs(root):
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        while stack:
            x, in_edge, it = stack[-1]
            advanced = False
            for y, eid in it:
                if eid == in_edge:
                    continue
                if disc[y] == -1:
                    disc[y] = low[y] = counter[0]
                    counter[0] += 1
                    stack.append((y, eid, iter(adj[y])))
                    advanced = True
                    break
                low[x] = min(low[x], disc[y])
            if not advanced:
                stack.pop()
                if stack:
                    px = stack[-1][0]
                    low[px] = min(low[px], low[x])
                    if low[x] > disc[px]:
                        out.add(in_edge)

    for r in range(n):
        if disc[r] == -1:
            dfs(r)
    return frozenset(out)


def bridges(graph: TrivalentGraph) -> frozenset[int]:
    return bridges_of_edges(graph.edges, graph.num_vertices)


def simple_cycles_of_edges(edges, n) -> tuple[tuple[int, ...], ...]:
    """All simple cycles as sorted tuples of edge indices.

    Loops are 1-cycles, parallel pairs are 2-cycles, and longer cycles are
    found by DFS over vertex paths (smallest vertex first, direction fixed)
    with every combination of parallel edges counted separately.
    """
    cycles = set()
    by_pair: dict[tuple[int, int], list[int]] = {}
    for i, (u, v) in enumerate(edges):
        if u == v:
            cycles.add((i,))
        else:
            by_pair.setdefault((u, v), []).append(i)
    for ids in by_pair.values():
        for a, b in combinations(ids, 2):
            cycles.add((a, b))

    nbrs: dict[int, set[int]] = {x: set() for x in range(n)}
    for (u, v) in by_pair:
        nbrs[u].add(v)
        nbrs[v].add(u)

    def vertex_cycles_from(s):
        # paths s -> ... -> t (all intermediate > s), closing back to s
        found = []
        path = [s]
        onpath = {s}

        def rec(x):
            for y in sorted(nbrs[x]):
                if y == s and len(path) >= 3:
                    if path[1] < path[-1]:  # fix traversal direction
                        found.append(list(path))
                elif y > s and y not in onpath:
                    path.append(y)
                    onpath.add(y)
                    rec(y)
                    onpath.remove(y)
                    path.pop()

        rec(s)
        return found

    for s in range(n):
        for vpath in vertex_cycles_from(s):
            hops = list(zip(vpath, vpath[1:] + [vpath[0]]))
            choices = [by_pair[(min(a, b), max(a, b))] for a, b in hops]
            for combo in product(*choices):
                cycles.add(tuple(sorted(combo)))
    return tuple(sorted(cycles))


def simple_cycles(graph: TrivalentGraph) -> tuple[tuple[int, ...], ...]:
    return simple_cycles_of_edges(graph.edges, graph.num_vertices)


# ---------------------------------------------------------------------------
# named graphs and identifiers
# ---------------------------------------------------------------------------

def dumbbell() -> TrivalentGraph:
    """Two loops joined by a bar: edges (loop at 0, loop at 1, bar)."""
    return TrivalentGraph(((0, 0), (1, 1), (0, 1)))


def theta_graph() -> TrivalentGraph:
    """Two vertices joined by three parallel edges."""
    return TrivalentGraph(((0, 1), (0, 1), (0, 1)))


def complete_graph_k4() -> TrivalentGraph:
    return TrivalentGraph(((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


_ALIASES = {
    "dumbbell": dumbbell,
    "theta": theta_graph,
    "k4": complete_graph_k4,
}


def resolve_graph(identifier: str) -> TrivalentGraph:
    """Look a graph up by alias (dumbbell, theta, k4) or canonical hex id."""
    key = identifier.strip().lower()
    if key in _ALIASES:
        return canonical_graph(_ALIASES[key]())
    try:
        blob = bytes.fromhex(key)
    except ValueError:
        raise InvalidGraphError(f"unknown graph identifier {identifier!r}") from None
    return graph_from_canonical_form(blob)


def text_record(graph: TrivalentGraph) -> str:
    """One-line text format: rank, vertices, edge list, canonical hex id."""
    parts = " ".join(f"{i}:{u}-{v}" for i, (u, v) in enumerate(graph.edges))
    return (f"rank={graph.rank}; vertices={graph.num_vertices}; "
            f"edges: {parts}; canonical={graph.canonical_id()}")
