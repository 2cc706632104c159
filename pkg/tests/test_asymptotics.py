"""Counting constants, exponent-weighted sums, and synthetic ensembles."""

import math
import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from scipy.integrate import quad

from covermeasure import asymptotics as A
from covermeasure import functionals as FN
from covermeasure import graphs as G

F = Fraction


# --- counting model ------------------------------------------------------------

def test_model_constants_rank2_genus2():
    m = A.CountingModel(genus=2, rank=2)
    assert m.sum_inv_aut == F(5, 24)
    assert m.c_prime == pytest.approx((27 / 64) / math.pi ** 2, rel=1e-15)
    expected_c = (5 / 24) * (27 / 64) / math.pi ** 2 / 2
    assert m.c == pytest.approx(expected_c, rel=1e-15)
    assert m.c == pytest.approx(4.452591078e-3, rel=1e-9)
    assert m.unit_tangent_volume == pytest.approx(8 * math.pi ** 2, rel=1e-15)


def test_model_constant_against_high_precision():
    m = A.CountingModel(genus=2, rank=2)
    reference = float(m.c_high_precision(dps=60))
    assert abs(m.c - reference) / reference < 1e-12


def test_model_validation():
    with pytest.raises(ValueError):
        A.CountingModel(genus=1, rank=2)
    with pytest.raises(ValueError):
        A.CountingModel(genus=2, rank=1)


def test_huber_count():
    assert A.huber_count(2.0) == pytest.approx(math.e ** 2 / 4, rel=1e-15)
    ratio = A.huber_count(10.0) / A.huber_count(9.0)
    assert ratio == pytest.approx(math.e * 9 / 10, rel=1e-12)
    values = [A.huber_count(l) for l in (1.5, 2.0, 3.0, 5.0)]
    assert values == sorted(values)
    with pytest.raises(ValueError):
        A.huber_count(0.0)


def test_subgroup_count_shape():
    m = A.CountingModel(genus=2, rank=2)
    v10 = A.subgroup_count_asymptotic(m, 10.0)
    assert v10 == pytest.approx(m.c * 100 * math.exp(10), rel=1e-15)
    # value(L+1)/value(L) -> e for large L
    big = A.subgroup_count_asymptotic(m, 201.0) / A.subgroup_count_asymptotic(m, 200.0)
    assert big == pytest.approx(math.e, rel=2e-2)


def test_crit_count_euler_characteristic():
    db = G.dumbbell()
    assert db.euler_characteristic == -1
    m = A.CountingModel(genus=2, rank=2)
    # exponent of L is -3*chi - 1 = 2 = 3k - 4
    v1 = A.crit_count_asymptotic(db, 2, 10.0)
    v2 = A.crit_count_asymptotic(db, 2, 20.0)
    assert v2 / v1 == pytest.approx(4 * math.exp(10), rel=1e-12)
    assert A.subgroup_count_asymptotic(m, 7.0) > 0


def test_crit_sum_identity_random_models():
    rng = random.Random(99)
    for _ in range(20):
        genus = rng.randint(2, 5)
        rank = rng.randint(2, 4)
        length = rng.uniform(3.0, 40.0)
        model = A.CountingModel(genus=genus, rank=rank)
        lhs = sum(
            A.crit_count_asymptotic(g, genus, length)
            / len(G.automorphism_group(g))
            for g in G.enumerate_trivalent(rank)
        )
        rhs = A.subgroup_count_asymptotic(model, length)
        assert abs(lhs - rhs) / rhs < 1e-12


# --- box counts ------------------------------------------------------------------

def test_box_depends_only_on_corner_norm():
    db = G.dumbbell()
    a = A.crit_box_asymptotic(db, 2, (1.0, 2.0, 3.0), 0.1)
    b = A.crit_box_asymptotic(db, 2, (2.0, 2.0, 2.0), 0.1)
    assert a == pytest.approx(b, rel=1e-12)
    shifted = A.crit_box_asymptotic(db, 2, (2.0, 2.0, 3.0), 0.1)
    assert shifted / a == pytest.approx(math.e, rel=1e-12)


def test_box_sum_reconstructs_count():
    """Riemann sum of box counts over the corner grid, mirroring the proof.

    Summing the per-box asymptotic over all corners of norm at most L
    carries the discretization factor ((e^h - 1)/h)^(3k-3) that the proof
    removes in its final h -> 0 limit; after dividing it out the sum must
    land within 5% of the closed-form count at L = 40, h = 0.1.
    """
    db = G.dumbbell()
    genus, h, length = 2, 0.1, 40.0
    steps = int(round(length / h))
    # the |Omega(K)| boxes at corner norm K*h share one value; the K = 0 box
    # contributes ~(e^h - 1)^3 and is negligible against e^L
    total = sum(
        comb(k_norm + 2, 2)
        * A.crit_box_asymptotic(db, genus, (k_norm * h / 3.0,) * 3, h)
        for k_norm in range(1, steps + 1)
    )
    discretization = ((math.exp(h) - 1) / h) ** 3
    reference = A.crit_count_asymptotic(db, genus, length)
    assert abs(total / discretization / reference - 1) < 0.05


def test_box_validation():
    with pytest.raises(ValueError):
        A.crit_box_asymptotic(G.dumbbell(), 2, (1.0, 1.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        A.crit_box_asymptotic(G.dumbbell(), 2, (1.0, -1.0, 1.0), 0.1)


# --- exponent-weighted sums ---------------------------------------------------------

def test_ps_partial_sum_example():
    val = A.ps_partial_sum([1.0, 2.0, 3.0], 2.0, 10.0)
    expected = math.exp(-2) + math.exp(-4) + math.exp(-6)
    assert val == pytest.approx(expected, rel=1e-15)
    assert A.ps_partial_sum([1.0, 2.0, 3.0], 0.0, 2.5) == 2.0
    assert A.ps_partial_sum([1.0, 2.0], 2.0, 10.0) \
        >= A.ps_partial_sum([1.0, 2.0], 3.0, 10.0)


@settings(max_examples=40, deadline=None)
@given(
    lengths=st.lists(st.floats(min_value=0.01, max_value=30.0),
                     min_size=0, max_size=60),
    s=st.floats(min_value=0.0, max_value=4.0),
    bound=st.floats(min_value=0.5, max_value=35.0),
)
def test_stieltjes_identity(lengths, s, bound):
    # s >= 0 keeps every term of the identity nonnegative; negative
    # exponents cancel the boundary term against the integral and float
    # agreement degrades with e^(|s| L)
    direct = A.ps_partial_sum(lengths, s, bound)
    via = A.ps_via_stieltjes(lengths, s, bound)
    if direct == 0.0:
        assert via == 0.0
    else:
        assert abs(direct - via) / direct < 1e-12


def test_stieltjes_negative_exponent_still_tracks():
    lengths = [0.5, 1.0, 2.5, 7.0]
    direct = A.ps_partial_sum(lengths, -0.8, 8.0)
    via = A.ps_via_stieltjes(lengths, -0.8, 8.0)
    assert abs(direct - via) / direct < 1e-9


def test_stieltjes_degenerate_cases():
    assert A.ps_via_stieltjes([], 2.0, 5.0) == 0.0
    assert A.ps_via_stieltjes([2.0], 3.0, 5.0) \
        == pytest.approx(math.exp(-6.0), rel=1e-14)


def test_model_closed_form_matches_quadrature():
    m = A.CountingModel(genus=2, rank=2)
    for s in (1.05, 1.1, 1.5):
        closed = A.ps_model_closed_form(m, s)
        integral, _ = quad(
            lambda t: s * m.c * t ** 2 * math.exp((1 - s) * t),
            0, np.inf, limit=300,
        )
        assert abs(closed - integral) / closed < 1e-3


def test_model_closed_form_monotone_and_divergent():
    m = A.CountingModel(genus=2, rank=2)
    assert A.ps_model_closed_form(m, 1.01) > A.ps_model_closed_form(m, 1.1) \
        > A.ps_model_closed_form(m, 1.5)
    for s in (1.0, 0.5, -2.0):
        with pytest.raises(A.SeriesDivergenceError):
            A.ps_model_closed_form(m, s)


def test_model_blowup_rate():
    m = A.CountingModel(genus=2, rank=2)
    gamma_limit = m.c * math.factorial(2)
    for eps in (0.1, 0.01):
        s = 1 + eps
        scaled = A.ps_model_closed_form(m, s) * eps ** 3
        assert abs(scaled / (s * gamma_limit) - 1) < 0.05


# --- synthetic ensembles --------------------------------------------------------------

def test_ensemble_markers_live_on_simplex():
    model = A.CountingModel(genus=2, rank=2)
    for mode in A.ENSEMBLE_MODES:
        ens = A.synthesize_ensemble(model, 10.0, mode, seed=1, cap=500)
        assert ens
        for point in ens[:100]:
            assert point.length > 0
            assert abs(float(sum(point.marker.lengths)) - 1) < 1e-9


def test_ensemble_length_distribution_kolmogorov_smirnov():
    # cap chosen high enough that the process runs to L_max, so the length
    # law has distribution function N(t)/N(L_max)
    model = A.CountingModel(genus=2, rank=2)
    l_max = 10.0
    pooled = []
    for seed in range(6):
        ens = A.synthesize_ensemble(model, l_max, "exact-marker",
                                    seed=seed, cap=100_000)
        pooled.extend(p.length for p in ens)
    n_max = model.c * l_max ** 2 * math.exp(l_max)

    def cdf(t):
        t = np.asarray(t)
        out = np.zeros_like(t, dtype=float)
        pos = t > 0
        out[pos] = model.c * t[pos] ** 2 * np.exp(t[pos]) / n_max
        return np.clip(out, 0.0, 1.0)

    res = stats.kstest(np.array(pooled), cdf)
    assert res.pvalue > 0.001


def test_ensemble_block_frequencies_exact_marker():
    model = A.CountingModel(genus=2, rank=2)
    ens = A.synthesize_ensemble(model, 14.0, "exact-marker", seed=3,
                                cap=100_000)
    db_id = G.dumbbell().canonical_id()
    freq = sum(p.marker.graph.canonical_id() == db_id for p in ens) / len(ens)
    sigma = math.sqrt(0.6 * 0.4 / len(ens))
    assert abs(freq - 0.6) < 3 * sigma


def test_lattice_marker_coarse_grid():
    model = A.CountingModel(genus=2, rank=2)
    ens = A.synthesize_ensemble(model, 40.0, "lattice-marker", seed=2,
                                cap=3000)
    short = [p for p in ens if p.length < 6]
    assert short
    for p in short:
        assert all(f.denominator <= 6 for f in p.marker.lengths)
        resolution = max(math.ceil(p.length), 3)
        assert all((f * resolution).denominator == 1 for f in p.marker.lengths)


def test_ensemble_validation():
    model = A.CountingModel(genus=2, rank=2)
    with pytest.raises(ValueError):
        A.synthesize_ensemble(model, 40.0, "bogus-mode", seed=0)
    with pytest.raises(ValueError):
        A.synthesize_ensemble(model, 0.5, "exact-marker", seed=0)


# --- weighted expectations --------------------------------------------------------------

def test_ps_measure_constant_is_one():
    model = A.CountingModel(genus=2, rank=2)
    ens = A.synthesize_ensemble(model, 10.0, "lattice-marker", seed=0, cap=2000)
    assert A.ps_measure_expectation(ens, lambda mg: 1.0, 1.3) == 1.0


def test_ps_measure_exact_marker_near_target():
    model = A.CountingModel(genus=2, rank=2)
    ens = A.synthesize_ensemble(model, 12.0, "exact-marker", seed=4,
                                cap=100_000)
    exact = 23 / 90
    for s in (1.1, 1.5):
        weights = np.array([math.exp(-s * p.length) for p in ens])
        values = np.array([float(FN.SYSTOLE.scalar(p.marker)) for p in ens])
        est = A.ps_measure_expectation(ens, FN.SYSTOLE, s)
        agree = float(np.sum(weights * values) / np.sum(weights))
        assert est == pytest.approx(agree, rel=1e-12)
        wmean = np.sum(weights * values) / np.sum(weights)
        stderr = math.sqrt(
            float(np.sum(weights ** 2 * (values - wmean) ** 2))
        ) / float(np.sum(weights))
        assert abs(est - exact) < 3 * stderr


def test_ps_measure_directional_improvement():
    model = A.CountingModel(genus=2, rank=2)
    ens = A.synthesize_ensemble(model, 12.0, "lattice-marker", seed=0,
                                cap=5000)
    exact = 23 / 90
    err_low = abs(A.ps_measure_expectation(ens, FN.SYSTOLE, 1.02) - exact)
    err_high = abs(A.ps_measure_expectation(ens, FN.SYSTOLE, 1.5) - exact)
    assert err_low < err_high


def test_ps_measure_validation():
    model = A.CountingModel(genus=2, rank=2)
    ens = A.synthesize_ensemble(model, 8.0, "exact-marker", seed=0, cap=100)
    with pytest.raises(A.SeriesDivergenceError):
        A.ps_measure_expectation(ens, FN.SYSTOLE, 1.0)
    with pytest.raises(ValueError):
        A.ps_measure_expectation([], FN.SYSTOLE, 1.5)


# --- expected systole line ---------------------------------------------------------------

def test_expected_systole_line():
    assert A.expected_systole_line(90) == 23
    assert A.expected_systole_line(F(90)) == 23
    assert A.expected_systole_line(0) == 0
    line = A.expected_systole_line(F(1))
    assert line == F(23, 90)
    with pytest.raises(A.UnsupportedRankError):
        A.expected_systole_line(10.0, rank=3)
