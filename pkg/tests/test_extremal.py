"""Pointwise extremal growth estimates from pinned minimax problems."""

import math

import numpy as np
import pytest

import psilab
from psilab.manifold_models import sample_compact
from psilab.extremal import christoffel_estimate, reference_extremal

CLASSIC = psilab.classic(1)
TORUS = psilab.torus(1)
ACOSH2 = math.acosh(2.0)  # log(2 + sqrt(3)), interval extremal value at z=2


@pytest.fixture(scope="module")
def interval_800():
    return sample_compact("interval[-1,1]", CLASSIC, 800)


def test_interval_pole_point_matches_continuum(interval_800):
    """Discrete estimate tracks acosh(2) - log(2)/t to 0.1% per degree."""
    errs = []
    for t in (10.0, 20.0, 40.0):
        est = christoffel_estimate(CLASSIC, interval_800, 2.0 + 0j, t)
        want = ACOSH2 - math.log(2.0) / t
        assert est.log_phi_t == pytest.approx(want, rel=1e-3)
        errs.append(abs(est.log_phi_t - ACOSH2))
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_interval_estimate_below_reference(interval_800):
    ref = reference_extremal(CLASSIC, "interval[-1,1]", 2.0 + 0j)
    for t in (10.0, 25.0):
        est = christoffel_estimate(CLASSIC, interval_800, 2.0 + 0j, t, reference=ref)
        assert est.log_phi_t <= ref + 1e-12
        assert est.reference == ref
        assert est.bracket >= 0.0


def test_point_inside_K_pins_to_zero(interval_800):
    est = christoffel_estimate(CLASSIC, interval_800, 0.5 + 0j, 20.0)
    assert 0.0 <= est.log_phi_t <= 1e-3


def test_superset_monotone_on_nested_meshes():
    # Chebyshev extrema for M=241 are a subset of those for M=481
    K_small = sample_compact("interval[-1,1]", CLASSIC, 241)
    K_big = sample_compact("interval[-1,1]", CLASSIC, 481)
    small_pts = {round(float(z.real), 14) for z in K_small.points[:, 0]}
    big_pts = {round(float(z.real), 14) for z in K_big.points[:, 0]}
    assert small_pts <= big_pts
    for t in (8.0, 16.0):
        lo = christoffel_estimate(CLASSIC, K_small, 2.0 + 0j, t)
        hi = christoffel_estimate(CLASSIC, K_big, 2.0 + 0j, t)
        assert hi.log_phi_t <= lo.log_phi_t + 1e-10


def test_torus_point_recovers_imag_norm():
    K = sample_compact("torus-real", TORUS, 400)
    est = christoffel_estimate(TORUS, K, 0.3 + 0.25j, 4 * math.pi)
    assert est.log_phi_t == pytest.approx(0.25, abs=1e-6)
    assert est.converged


def test_nonnegative_everywhere(interval_800):
    rng = np.random.default_rng(17)
    for _ in range(8):
        z = complex(rng.normal(scale=2), rng.normal(scale=2))
        est = christoffel_estimate(CLASSIC, interval_800, z, 12.0)
        assert est.log_phi_t >= -1e-12


def test_rank_deficient_duplicate_map_columns():
    # g = (z, z) duplicates every product; 9 distinct powers survive at t=4
    P = psilab.Polynomial({(1,): 1.0}, 1)
    model = psilab.mapped_polynomial([P, P], 1)
    K = sample_compact("interval[-1,1]", model, 200)
    est = christoffel_estimate(model, K, 2.0 + 0j, 4.0)
    assert est.rank_deficient
    assert est.effective_dim == 9


def test_reference_extremal_formulas():
    assert reference_extremal(CLASSIC, "interval[-1,1]", 2.0 + 0j) == pytest.approx(
        ACOSH2, rel=1e-15
    )
    assert reference_extremal(CLASSIC, "interval[-1,1]", 0.5 + 0j) == 0.0
    assert reference_extremal(CLASSIC, "circle", 3.0 + 0j) == pytest.approx(
        math.log(3.0), rel=1e-15
    )
    assert reference_extremal(CLASSIC, "circle", 0.5 + 0j) == 0.0
    assert reference_extremal(TORUS, "torus-real", 0.3 + 0.25j) == pytest.approx(0.25)
    assert reference_extremal(CLASSIC, "torus-real", 0.3 + 0.25j) is None
    assert reference_extremal(CLASSIC, "pentagon", 1.0 + 0j) is None


def test_wrapper_returns_plain_float(interval_800):
    v = psilab.christoffel_log_phi(CLASSIC, interval_800, 2.0 + 0j, 20.0)
    est = christoffel_estimate(CLASSIC, interval_800, 2.0 + 0j, 20.0)
    assert isinstance(v, float)
    assert v == est.log_phi_t


def test_rejects_nonpositive_t(interval_800):
    with pytest.raises(ValueError):
        christoffel_estimate(CLASSIC, interval_800, 2.0 + 0j, 0.0)
    with pytest.raises(ValueError):
        christoffel_estimate(CLASSIC, interval_800, 2.0 + 0j, -3.0)
