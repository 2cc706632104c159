"""Counting asymptotics, the exponent-weighted series, and synthetic ensembles.

The counting model packages the closed-form constants: the per-type box
constant c'_{g,k} = (4/3)^(3-3k) (pi^2 (g-1))^(1-k) and the global
constant c_{g,k} = (sum over types of 1/|Aut|) * c'_{g,k} / (3k-4)!,
against which the count of length-at-most-L subgroups grows like
c_{g,k} L^(3k-4) e^L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import functionals
from .graphs import TrivalentGraph, automorphism_group, enumerate_trivalent
from .measure import MetricGraph, build_limit_measure, expectation


class SeriesDivergenceError(ValueError):
    """The exponent-weighted series diverges at this exponent (s <= 1)."""


class UnsupportedRankError(ValueError):
    pass


@dataclass(frozen=True)
class CountingModel:
    genus: int
    rank: int

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 2:
            raise ValueError(f"genus must be an integer >= 2, got {self.genus!r}")
        if not isinstance(self.rank, int) or self.rank < 2:
            raise ValueError(f"rank must be an integer >= 2, got {self.rank!r}")

    @cached_property
    def sum_inv_aut(self) -> Fraction:
        return sum(
            Fraction(1, len(automorphism_group(g)))
            for g in enumerate_trivalent(self.rank)
        )

    @cached_property
    def c_prime(self) -> float:
        g, k = self.genus, self.rank
        return (4.0 / 3.0) ** (3 - 3 * k) * (math.pi ** 2 * (g - 1)) ** (1 - k)

    @cached_property
    def c(self) -> float:
        k = self.rank
        return float(self.sum_inv_aut) * self.c_prime / math.factorial(3 * k - 4)

    @property
    def unit_tangent_volume(self) -> float:
        return 8.0 * math.pi ** 2 * (self.genus - 1)

    def c_high_precision(self, dps: int = 50):
        """The global constant via mpmath, for cross-checking the float path."""
        import mpmath

        with mpmath.workdps(dps):
            g, k = self.genus, self.rank
            pi2 = mpmath.pi ** 2
            val = (
                mpmath.mpf(self.sum_inv_aut.numerator) / self.sum_inv_aut.denominator
                * (mpmath.mpf(4) / 3) ** (3 - 3 * k)
                * (pi2 * (g - 1)) ** (1 - k)
                / mpmath.factorial(3 * k - 4)
            )
            return +val

    def count_function_log(self, t: float) -> float:
        """log of the model counting function N(t) = c t^(3k-4) e^t."""
        if t <= 0:
            raise ValueError("t must be positive")
        return math.log(self.c) + (3 * self.rank - 4) * math.log(t) + t


def huber_count(length_bound: float) -> float:
    """Closed-geodesic count model e^L / (2L)."""
    if length_bound <= 0:
        raise ValueError("length bound must be positive")
    return math.exp(length_bound) / (2.0 * length_bound)


def subgroup_count_asymptotic(model: CountingModel, length_bound: float) -> float:
    """c_{g,k} L^(3k-4) e^L."""
    if length_bound <= 0:
        raise ValueError("length bound must be positive")
    k = model.rank
    return model.c * length_bound ** (3 * k - 4) * math.exp(length_bound)


def crit_count_asymptotic(graph: TrivalentGraph, genus: int,
                          length_bound: float) -> float:
    """Per-type count (2/3)^(3 chi) vol(T1)^chi / (-3 chi - 1)! L^(-3 chi -1) e^L."""
    if genus < 2 or length_bound <= 0:
        raise ValueError("need genus >= 2 and a positive length bound")
    chi = graph.euler_characteristic
    vol_t1 = 8.0 * math.pi ** 2 * (genus - 1)
    return (
        (2.0 / 3.0) ** (3 * chi)
        * vol_t1 ** chi
        / math.factorial(-3 * chi - 1)
        * length_bound ** (-3 * chi - 1)
        * math.exp(length_bound)
    )


def crit_box_asymptotic(graph: TrivalentGraph, genus: int, corner, h: float) -> float:
    """Count of critical maps in an edge-length box of side h at the given
    corner; depends on the corner only through its L1-norm."""
    if genus < 2 or h <= 0:
        raise ValueError("need genus >= 2 and h > 0")
    corner = tuple(corner)
    if len(corner) != graph.num_edges or any(c <= 0 for c in corner):
        raise ValueError("corner must be a positive vector, one entry per edge")
    chi = graph.euler_characteristic
    vol_sigma = 4.0 * math.pi * (genus - 1)
    return (
        2.0 ** (4 * chi) / 3.0 ** (3 * chi)
        * math.pi ** chi
        * (math.expm1(h)) ** (-3 * chi)
        * math.exp(float(sum(corner)))
        / vol_sigma ** (-chi)
    )


# ---------------------------------------------------------------------------
# exponent-weighted sums
# ---------------------------------------------------------------------------

def ps_partial_sum(lengths, s: float, length_bound: float) -> float:
    """Sum of e^(-s l) over the lengths l <= L."""
    return math.fsum(math.exp(-s * l) for l in lengths if l <= length_bound)


def ps_via_stieltjes(lengths, s: float, length_bound: float) -> float:
    """The same partial sum through the step-function counting identity
    e^(-sL) N(L) + s * integral_0^L e^(-st) N(t) dt, with the integral
    evaluated exactly piece by piece.

    For s >= 0 every term is nonnegative and the identity holds to machine
    precision; for s < 0 the boundary term and the integral cancel and the
    float evaluation loses accuracy accordingly.
    """
    pts = sorted(l for l in lengths if l <= length_bound)
    if not pts:
        return 0.0
    boundary = math.exp(-s * length_bound) * len(pts)
    if s == 0:
        return float(len(pts))
    knots = pts + [length_bound]
    terms = [
        # s * int_a^b e^(-st) (j+1) dt over the j-th constant piece
        (j + 1) * (math.exp(-s * knots[j]) - math.exp(-s * knots[j + 1]))
        for j in range(len(pts))
    ]
    terms.append(boundary)
    return math.fsum(terms)


def ps_model_closed_form(model: CountingModel, s: float) -> float:
    """Exact value of s * integral_0^inf e^(-st) c t^(3k-4) e^t dt for s > 1:
    s c Gamma(3k-3) / (s-1)^(3k-3)."""
    if s <= 1:
        raise SeriesDivergenceError(
            f"the series diverges for s = {s} <= 1 (critical exponent 1)"
        )
    m = 3 * model.rank - 3
    return s * model.c * math.factorial(m - 1) / (s - 1.0) ** m


# ---------------------------------------------------------------------------
# synthetic ensembles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticSubgroup:
    length: float
    marker: MetricGraph


ENSEMBLE_MODES = ("exact-marker", "lattice-marker")


def _invert_count_function(model: CountingModel, log_targets: np.ndarray,
                           t_max: float) -> np.ndarray:
    lo = np.full_like(log_targets, 1e-12)
    hi = np.full_like(log_targets, t_max)
    exponent = 3 * model.rank - 4
    logc = math.log(model.c)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        val = logc + exponent * np.log(mid) + mid
        too_low = val < log_targets
        lo = np.where(too_low, mid, lo)
        hi = np.where(too_low, hi, mid)
    return 0.5 * (lo + hi)


def _uniform_positive_composition(rng, total: int, parts: int) -> tuple[int, ...]:
    if parts == 1:
        return (total,)
    cuts = np.sort(rng.choice(total - 1, size=parts - 1, replace=False)) + 1
    bounds = np.concatenate(([0], cuts, [total]))
    return tuple(int(x) for x in np.diff(bounds))


def synthesize_ensemble(model: CountingModel, l_max: float, mode: str,
                        seed: int, cap: int = 100_000) -> list[SyntheticSubgroup]:
    """Draw a synthetic length/marker ensemble.

    Lengths follow a Poisson process with intensity N'(t) on (0, l_max],
    truncated to at most ``cap`` points from below (the process is stopped
    once the cap is reached).  Markers are drawn per point: exact-marker
    mode samples the limit measure itself; lattice-marker mode samples the
    lattice discretization at resolution N = max(ceil(length), E), which
    carries a coarseness bias that fades as the length grows.
    """
    if mode not in ENSEMBLE_MODES:
        raise ValueError(f"mode must be one of {ENSEMBLE_MODES}, got {mode!r}")
    if l_max <= 0:
        raise ValueError("l_max must be positive")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    log_n_max = model.count_function_log(l_max)
    if log_n_max < 0:
        raise ValueError(
            f"expected count N({l_max}) < 1; enlarge l_max for this model"
        )
    rng = np.random.default_rng(seed)

    arrivals = []
    running = 0.0
    while len(arrivals) < cap:
        batch = rng.standard_exponential(min(4096, cap - len(arrivals)))
        sums = running + np.cumsum(batch)
        running = float(sums[-1])
        inside = np.log(sums) <= log_n_max
        arrivals.extend(sums[inside].tolist())
        if not inside.all():
            break
    targets = np.log(np.asarray(arrivals))
    lengths = _invert_count_function(model, targets, l_max)

    mixture = build_limit_measure(model.rank)
    cum = np.cumsum([float(w) for w in mixture.weights])
    block_idx = np.minimum(
        np.searchsorted(cum, rng.random(len(lengths)), side="right"),
        len(mixture.blocks) - 1,
    )
    n_edges = mixture.blocks[0].graph.num_edges

    out = []
    if mode == "exact-marker":
        exps = rng.standard_exponential((len(lengths), n_edges))
        rows = exps / exps.sum(axis=1, keepdims=True)
        for l, b, row in zip(lengths, block_idx, rows):
            marker = MetricGraph(mixture.blocks[int(b)].graph,
                                 tuple(float(x) for x in row))
            out.append(SyntheticSubgroup(length=float(l), marker=marker))
    else:
        for l, b in zip(lengths, block_idx):
            resolution = max(math.ceil(l), n_edges)
            point = _uniform_positive_composition(rng, resolution, n_edges)
            marker = MetricGraph(
                mixture.blocks[int(b)].graph,
                tuple(Fraction(c, resolution) for c in point),
            )
            out.append(SyntheticSubgroup(length=float(l), marker=marker))
    return out


def ps_measure_expectation(ensemble, f, s: float) -> float:
    """Expectation of f under the e^(-s length)-weighted probability measure
    over the ensemble."""
    if s <= 1:
        raise SeriesDivergenceError(
            f"the weighted measure needs s > 1, got s = {s}"
        )
    if not ensemble:
        raise ValueError("ensemble is empty")
    fn = f.scalar if isinstance(f, functionals.Functional) else f
    lmin = min(p.length for p in ensemble)
    num = 0.0
    den = 0.0
    for p in ensemble:
        w = math.exp(-s * (p.length - lmin))
        num += w * float(fn(p.marker))
        den += w
    return num / den


# ---------------------------------------------------------------------------
# expected systole
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _systole_slope(rank: int) -> Fraction:
    return expectation(build_limit_measure(rank), functionals.SYSTOLE)


def expected_systole_line(length_bound, rank: int = 2):
    """Leading-order expected systole at length bound L; (23/90) L for rank 2."""
    if rank != 2:
        raise UnsupportedRankError(
            "only rank 2 is supported here; combine expectation() with L directly"
        )
    if length_bound < 0:
        raise ValueError("length bound must be nonnegative")
    return _systole_slope(2) * length_bound
