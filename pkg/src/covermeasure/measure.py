"""The limit measure on moduli space, lattice discretizations, and integrators.

The measure is a mixture of simplex blocks, one per trivalent graph type:
block X carries mass |Triv(X)|/|Aut(X)| and mixture weight
(1/|Aut(X)|) / sum(1/|Aut(X')|).  All weights stay exact rationals;
floating point enters only in Monte Carlo sampling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from .functionals import Functional
from .graphs import (
    TrivalentGraph,
    automorphism_group,
    edge_action,
    enumerate_trivalent,
    triv_subgroup,
)

_FLOAT_VOLUME_TOL = 1e-9


class InvalidSampleCountError(ValueError):
    pass


class SymmetryViolationError(ValueError):
    pass


@dataclass(frozen=True)
class MetricGraph:
    """A point of moduli space: a graph type plus positive edge lengths
    summing to one (exactly for rational lengths, to 1e-9 for floats)."""

    graph: TrivalentGraph
    lengths: tuple

    def __post_init__(self):
        lengths = tuple(self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if len(lengths) != self.graph.num_edges:
            raise ValueError("one length per edge required")
        if any(l <= 0 for l in lengths):
            raise ValueError("edge lengths must be positive")
        total = sum(lengths)
        if self.is_exact:
            if total != 1:
                raise ValueError(f"exact lengths must sum to 1, got {total}")
        elif abs(total - 1.0) > _FLOAT_VOLUME_TOL:
            raise ValueError(f"lengths must sum to 1, got {total!r}")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(l, (Fraction, int)) for l in self.lengths)


@dataclass(frozen=True)
class SimplexBlock:
    """One open simplex of moduli space with its sigma-measure mass."""

    graph: TrivalentGraph
    mass: Fraction
    dimension: int

    @classmethod
    def for_graph(cls, graph: TrivalentGraph) -> "SimplexBlock":
        mass = Fraction(len(triv_subgroup(graph)), len(automorphism_group(graph)))
        return cls(graph=graph, mass=mass, dimension=graph.num_edges - 1)


@dataclass(frozen=True)
class MeasureMixture:
    """The limit measure: weighted simplex blocks, weights summing to one."""

    blocks: tuple[SimplexBlock, ...]
    weights: tuple[Fraction, ...]
    normalization: Fraction  # reciprocal of sum over types of 1/|Aut|

    def __post_init__(self):
        if len(self.blocks) != len(self.weights):
            raise ValueError("one weight per block required")
        if sum(self.weights) != 1:
            raise ValueError("block weights must sum to 1")

    @property
    def rank(self) -> int:
        return self.blocks[0].graph.rank

    def weight_of(self, graph: TrivalentGraph) -> Fraction:
        key = graph.canonical_form()
        for block, w in zip(self.blocks, self.weights):
            if block.graph.canonical_form() == key:
                return w
        raise KeyError("graph type is not a block of this mixture")


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Finite weighted point set on moduli space."""

    atoms: tuple[tuple[MetricGraph, object], ...]

    def __post_init__(self):
        if any(w < 0 for _, w in self.atoms):
            raise ValueError("atom weights must be nonnegative")

    @property
    def total_mass(self):
        return sum(w for _, w in self.atoms)

    def expectation(self, f):
        """Normalized integral of f; exact if weights and values are exact."""
        fn = f.scalar if isinstance(f, Functional) else f
        total = self.total_mass
        if total == 0:
            raise ValueError("empirical measure has zero mass")
        return sum(w * fn(mg) for mg, w in self.atoms) / total


def build_limit_measure(k: int) -> MeasureMixture:
    """The limit probability measure for rank k, one block per graph type.

    Block weight is (1/|Aut X|) / sum_X'(1/|Aut X'|); for k = 2 this gives
    3/5 on the dumbbell block and 2/5 on the theta block.
    """
    graphs = enumerate_trivalent(k)
    blocks = tuple(SimplexBlock.for_graph(g) for g in graphs)
    inv_auts = [Fraction(1, len(automorphism_group(g))) for g in graphs]
    total = sum(inv_auts)
    weights = tuple(w / total for w in inv_auts)
    return MeasureMixture(blocks=blocks, weights=weights, normalization=1 / total)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _cumulative_weights(mixture: MeasureMixture) -> np.ndarray:
    return np.cumsum([float(w) for w in mixture.weights])


def _draw_rows(rng, count: int, n_edges: int) -> np.ndarray:
    exps = rng.standard_exponential((count, n_edges))
    return exps / exps.sum(axis=1, keepdims=True)


def sample(mixture: MeasureMixture, rng_seed: int) -> MetricGraph:
    """One draw from the mixture: block by weight, lengths uniform on the
    open simplex via normalized exponentials.  Deterministic given the seed."""
    rng = np.random.default_rng(rng_seed)
    cum = _cumulative_weights(mixture)
    b = int(np.searchsorted(cum, rng.random(), side="right"))
    b = min(b, len(mixture.blocks) - 1)
    row = _draw_rows(rng, 1, mixture.blocks[b].graph.num_edges)[0]
    return MetricGraph(mixture.blocks[b].graph, tuple(float(x) for x in row))


def sample_chunks(mixture: MeasureMixture, n: int, seed: int,
                  chunk_size: int = 1 << 16):
    """Yield (block_indices, length_rows) chunks covering n draws.

    Chunk c uses the c-th spawn of SeedSequence(seed), so results are
    reproducible for a fixed chunk layout regardless of scheduling.
    """
    n_edges = mixture.blocks[0].graph.num_edges
    cum = _cumulative_weights(mixture)
    n_chunks = (n + chunk_size - 1) // chunk_size
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    done = 0
    for child in children:
        m = min(chunk_size, n - done)
        done += m
        rng = np.random.default_rng(child)
        u = rng.random(m)
        rows = _draw_rows(rng, m, n_edges)
        idx = np.minimum(np.searchsorted(cum, u, side="right"),
                         len(mixture.blocks) - 1)
        yield idx, rows


def sample_many(mixture: MeasureMixture, count: int, seed: int) -> list[MetricGraph]:
    out = []
    for idx, rows in sample_chunks(mixture, count, seed):
        for b, row in zip(idx, rows):
            out.append(MetricGraph(mixture.blocks[int(b)].graph,
                                   tuple(float(x) for x in row)))
    return out


def integrate_mc(mixture: MeasureMixture, f, n: int, seed: int,
                 chunk_size: int = 1 << 16) -> tuple[float, float]:
    """Monte Carlo estimate (mean, standard error) of f over the mixture.

    Named functionals with a vectorized kernel run batched; any other
    callable is evaluated per sample on MetricGraph values.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidSampleCountError(f"need at least 2 samples, got {n!r}")
    kernel = f.kernel if isinstance(f, Functional) else None
    scalar = f.scalar if isinstance(f, Functional) else f
    values = np.empty(n)
    pos = 0
    for idx, rows in sample_chunks(mixture, n, seed, chunk_size):
        m = len(rows)
        chunk_vals = np.empty(m)
        if kernel is not None:
            for b in np.unique(idx):
                mask = idx == b
                chunk_vals[mask] = kernel(mixture.blocks[int(b)].graph, rows[mask])
        else:
            for i in range(m):
                mg = MetricGraph(mixture.blocks[int(idx[i])].graph,
                                 tuple(float(x) for x in rows[i]))
                chunk_vals[i] = scalar(mg)
        values[pos:pos + m] = chunk_vals
        pos += m
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(n))
    return mean, stderr


# ---------------------------------------------------------------------------
# lattice measures
# ---------------------------------------------------------------------------

def _positive_compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _positive_compositions(total - first, parts - 1):
            yield (first,) + rest


def _nonnegative_compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(0, total + 1):
        for rest in _nonnegative_compositions(total - first, parts - 1):
            yield (first,) + rest


def lattice_points(graph: TrivalentGraph, n_slices: int
                   ) -> list[tuple[tuple[int, ...], int]]:
    """Orbit representatives of positive integer vectors with L1-norm
    ``n_slices`` under the edge action, with orbit sizes as multiplicities.

    Representatives are the lexicographic minimum of each orbit; the
    multiplicities add up to C(n_slices - 1, E - 1).  Below the number of
    edges there are no positive points and the list is empty.
    """
    n_edges = graph.num_edges
    if n_slices < n_edges:
        return []
    perms = edge_action(graph)
    seen: set[tuple[int, ...]] = set()
    out = []
    for point in _positive_compositions(n_slices, n_edges):
        if point in seen:
            continue
        orbit = set()
        for perm in perms:
            img = [0] * n_edges
            for i, p in enumerate(perm):
                img[p] = point[i]
            orbit.add(tuple(img))
        seen |= orbit
        out.append((min(orbit), len(orbit)))
    out.sort()
    return out


def lattice_sigma(graph: TrivalentGraph, n_slices: int) -> EmpiricalMeasure:
    """The lattice discretization of the block measure at resolution N.

    Atoms sit at n/N for each orbit representative, weighted by
    (|Triv|/|Aut|) * multiplicity / C(N-1, E-1), so the total mass is
    exactly |Triv|/|Aut| at every N.
    """
    block = SimplexBlock.for_graph(graph)
    pts = lattice_points(graph, n_slices)
    denom = comb(n_slices - 1, graph.num_edges - 1)
    atoms = []
    for point, mult in pts:
        mg = MetricGraph(graph, tuple(Fraction(c, n_slices) for c in point))
        atoms.append((mg, block.mass * Fraction(mult, denom)))
    return EmpiricalMeasure(atoms=tuple(atoms))


def omega_counts(k: int, n_norm: int, predicate: Callable) -> tuple[int, int]:
    """(|Omega(N)|, |Omega_A(N)|): nonnegative integer vectors of length
    3k-3 with L1-norm N, and those whose projectivization n/N satisfies the
    predicate.  The zero vector (N = 0) has no projectivization and never
    counts toward Omega_A."""
    n_edges = 3 * k - 3
    total = comb(n_norm + n_edges - 1, n_edges - 1)
    if n_norm == 0:
        return total, 0
    hits = 0
    for point in _nonnegative_compositions(n_norm, n_edges):
        if predicate(tuple(Fraction(c, n_norm) for c in point)):
            hits += 1
    return total, hits


# ---------------------------------------------------------------------------
# exact integration of min-of-linear-forms functionals
# ---------------------------------------------------------------------------

def _dot(coeffs, vec):
    return sum(c * x for c, x in zip(coeffs, vec))


def _rel_volume(vertices) -> Fraction:
    """Simplex volume relative to the standard simplex, via the determinant
    of edge vectors after dropping the last coordinate."""
    d = len(vertices) - 1
    mat = [[vertices[i + 1][j] - vertices[0][j] for j in range(d)]
           for i in range(d)]
    det = Fraction(1)
    for col in range(d):
        piv = next((r for r in range(col, d) if mat[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = mat[col][col]
        for r in range(col + 1, d):
            factor = mat[r][col] / inv
            if factor:
                for c in range(col, d):
                    mat[r][c] -= factor * mat[col][c]
    return abs(det)


def _split_simplex(vertices, hyper):
    """Cut a simplex along hyper(x) = 0 into simplices on one closed side each."""
    vals = [_dot(hyper, w) for w in vertices]
    pos = next((i for i, v in enumerate(vals) if v > 0), None)
    neg = next((i for i, v in enumerate(vals) if v < 0), None)
    if pos is None or neg is None:
        return [vertices]
    va, vb = vals[pos], vals[neg]
    cut = tuple((va * wb - vb * wa) / (va - vb)
                for wa, wb in zip(vertices[pos], vertices[neg]))
    left = list(vertices)
    left[pos] = cut
    right = list(vertices)
    right[neg] = cut
    return _split_simplex(tuple(left), hyper) + _split_simplex(tuple(right), hyper)


def _min_forms_expectation(forms, n_coords: int) -> Fraction:
    """E[min_i L_i(x)] for x uniform on the standard simplex, exactly.

    Subdivide until one form is minimal per cell (dominated forms dropped
    first), then use: integral of a linear form over a simplex equals
    volume times the mean of its vertex values.
    """
    forms = tuple(dict.fromkeys(tuple(Fraction(c) for c in f) for f in forms))
    start = tuple(
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(n_coords))
        for i in range(n_coords)
    )
    total = Fraction(0)
    stack = [(start, forms)]
    while stack:
        verts, fs = stack.pop()
        vals = [[_dot(f, w) for w in verts] for f in fs]
        keep = []
        for i in range(len(fs)):
            dominated = False
            for j in range(len(fs)):
                if i == j:
                    continue
                if all(a >= b for a, b in zip(vals[i], vals[j])):
                    if any(a > b for a, b in zip(vals[i], vals[j])) or j < i:
                        dominated = True
                        break
            if not dominated:
                keep.append(i)
        fs = tuple(fs[i] for i in keep)
        vals = [vals[i] for i in keep]
        hyper = None
        for i, j in itertools.combinations(range(len(fs)), 2):
            dv = [a - b for a, b in zip(vals[i], vals[j])]
            if any(v > 0 for v in dv) and any(v < 0 for v in dv):
                hyper = tuple(a - b for a, b in zip(fs[i], fs[j]))
                break
        if hyper is None:
            bary = tuple(sum(w[j] for w in verts) / len(verts)
                         for j in range(n_coords))
            fmin = min(fs, key=lambda f: _dot(f, bary))
            vol = _rel_volume(verts)
            if vol:
                total += vol * sum(_dot(fmin, w) for w in verts) / len(verts)
            continue
        for piece in _split_simplex(verts, hyper):
            stack.append((piece, fs))
    return total


def _symmetry_test_points(n_coords: int):
    bases = [
        [i + 1 for i in range(n_coords)],
        [(i + 1) ** 2 for i in range(n_coords)],
        [2 ** i for i in range(n_coords)],
        [(i + 2) ** 3 - 1 for i in range(n_coords)],
    ]
    pts = []
    for base in bases:
        s = sum(base)
        pts.append(tuple(Fraction(b, s) for b in base))
    return pts


def _check_symmetry(graph: TrivalentGraph, forms) -> None:
    def min_at(x):
        return min(_dot(f, x) for f in forms)

    for perm in edge_action(graph):
        for x in _symmetry_test_points(graph.num_edges):
            permuted = [Fraction(0)] * len(x)
            for i, p in enumerate(perm):
                permuted[p] = x[i]
            if min_at(tuple(permuted)) != min_at(x):
                raise SymmetryViolationError(
                    "functional is not invariant under the edge action"
                )


def integrate_exact(graph: TrivalentGraph, f) -> Fraction:
    """Normalized block expectation of a min-of-linear-forms functional,
    i.e. the integral against sigma_X divided by the block mass.

    The functional must be invariant under the edge action; this is
    checked exactly on fixed sample points for every group element.
    """
    forms = f.forms_for(graph) if isinstance(f, Functional) else tuple(f)
    if not forms:
        raise ValueError("need at least one linear form")
    forms = tuple(tuple(Fraction(c) for c in form) for form in forms)
    if any(len(form) != graph.num_edges for form in forms):
        raise ValueError("forms must have one coefficient per edge")
    _check_symmetry(graph, forms)
    return _min_forms_expectation(forms, graph.num_edges)


def quotient_integral(graph: TrivalentGraph, f) -> Fraction:
    """The block integral in the quotient-domain normalization, i.e.
    block mass times the normalized expectation."""
    return SimplexBlock.for_graph(graph).mass * integrate_exact(graph, f)


def expectation(mixture: MeasureMixture, f) -> Fraction:
    """Exact expectation of f against the mixture: sum of block weights
    times normalized block expectations."""
    return sum(w * integrate_exact(block.graph, f)
               for block, w in zip(mixture.blocks, mixture.weights))
