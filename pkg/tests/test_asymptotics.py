"""Rate extraction, growth order fits, telescoping extension."""

import math

import numpy as np
import pytest

import psilab
from psilab.manifold_models import sample_compact
from psilab.minimax import ApproxRecord, approx_sweep
from psilab.asymptotics import (
    growth_series_bound,
    order_type_estimate,
    rate_limsup,
    telescope_extend,
    usable_records,
    winiarski_check,
)

CLASSIC = psilab.classic(1)


def _rec(t, d, conv=True, floor=False):
    return ApproxRecord(
        t=t,
        dim=int(t) + 1,
        d_value=d,
        lower_bound=d * 0.99,
        iterations=10,
        converged=conv,
        floor_flag=floor,
        approximant=None,
    )


def test_rate_exact_geometric_decay():
    recs = [_rec(float(n), 2.0**-n) for n in range(4, 20)]
    rep = rate_limsup(recs, L_true=2.0)
    assert rep.L_hat == pytest.approx(2.0, abs=1e-12)
    assert rep.slope_fit == pytest.approx(-math.log(2.0), abs=1e-12)
    assert rep.verdict == "PASS"
    assert rep.n_used == 16


def test_rate_two_records_inconclusive_but_positive():
    recs = [_rec(4.0, 2.0**-4), _rec(5.0, 2.0**-5)]
    rep = rate_limsup(recs, L_true=2.0)
    assert rep.verdict == "INCONCLUSIVE"
    assert rep.L_hat > 0.0
    assert rep.L_hat == pytest.approx(2.0, rel=1e-12)


def test_rate_single_record_degenerate():
    rep = rate_limsup([_rec(4.0, 0.1)])
    assert rep.verdict == "INCONCLUSIVE"
    assert rep.L_hat == 1.0
    assert rep.slope_fit == 0.0


def test_rate_excludes_floored_tail():
    recs = [_rec(float(n), 2.0**-n) for n in range(4, 16)]
    recs += [_rec(20.0, 1e-16, floor=True), _rec(22.0, 1e-16, floor=True)]
    rep = rate_limsup(recs, L_true=2.0)
    assert rep.n_used == 12
    assert rep.L_hat == pytest.approx(2.0, abs=1e-12)
    assert rep.verdict == "PASS"


def test_usable_records_drops_stalls_and_floors():
    recs = [_rec(float(n), 2.0**-n, conv=(n % 3 != 0)) for n in range(4, 16)]
    assert len(usable_records(recs)) == 8


def test_winiarski_factorial_decay():
    """d_n = 1/(n+1)! matches order 1 type 1: plateau near e."""
    recs = [_rec(float(n), 1.0 / math.factorial(n + 1)) for n in range(6, 26)]
    rep = winiarski_check(recs, rho=1.0, sigma=1.0)
    assert rep.verdict == "PASS"
    assert rep.plateau == pytest.approx(math.e, rel=0.03)


def test_winiarski_equality_case():
    # d_t = (e sigma rho / t)^(t / rho) makes the bound an identity
    rho, sigma = 2.0, 0.5
    recs = [_rec(float(t), (math.e * sigma * rho / t) ** (t / rho)) for t in range(8, 40, 2)]
    rep = winiarski_check(recs, rho=rho, sigma=sigma)
    assert rep.verdict == "PASS"
    assert rep.plateau == pytest.approx(math.sqrt(math.e), abs=1e-12)


def test_winiarski_geometric_decay_fails_entire_bound():
    recs = [_rec(float(n), 2.0**-n) for n in range(6, 30)]
    rep = winiarski_check(recs, rho=1.0, sigma=1.0)
    assert rep.verdict == "FAIL"
    assert rep.plateau > rep.bound


def test_winiarski_rejects_nonpositive_rho():
    recs = [_rec(float(n), 2.0**-n) for n in range(6, 10)]
    with pytest.raises(ValueError):
        winiarski_check(recs, rho=0.0, sigma=1.0)
    with pytest.raises(ValueError):
        winiarski_check(recs, rho=-1.0, sigma=1.0)


def test_order_type_exponential():
    r = np.geomspace(4.0, 64.0, 10)
    est = order_type_estimate(psilab.Exp(1.0), CLASSIC, None, r)
    assert est.rho_hat == pytest.approx(1.0, rel=0.02)
    assert est.sigma_hat == pytest.approx(1.0, rel=0.02)


def test_order_type_squared_exponent():
    r = np.geomspace(2.0, 16.0, 8)
    est = order_type_estimate(psilab.ExpOfMonomial(2), CLASSIC, None, r)
    assert est.rho_hat == pytest.approx(2.0, rel=0.02)
    assert est.sigma_hat == pytest.approx(1.0, rel=0.02)


def test_order_type_polynomial_is_order_zero():
    f = psilab.PolynomialFn(psilab.Polynomial({(3,): 2.0, (0,): 1.0}, 1))
    est = order_type_estimate(f, CLASSIC, None, np.geomspace(1e2, 1e8, 10))
    assert est.rho_hat < 0.1


def test_order_type_grid_validation():
    with pytest.raises(ValueError):
        order_type_estimate(psilab.Exp(1.0), CLASSIC, None, [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ValueError):
        order_type_estimate(psilab.Exp(1.0), CLASSIC, None, [1.0, 2.0, 5.0, 4.0, 8.0])


@pytest.fixture(scope="module")
def pole_approximants():
    K = sample_compact("interval[-1,1]", CLASSIC, 400)
    f = psilab.RationalPole(2.0)
    recs = approx_sweep(CLASSIC, K, f, [float(t) for t in range(4, 29, 2)])
    return [r.approximant for r in recs], recs


def test_telescope_outside_K(pole_approximants):
    ps, _ = pole_approximants
    res = telescope_extend(ps, 1.5 + 0j)
    assert not res.out_of_domain
    assert abs(res.value - (-2.0)) <= 10.0 * res.last_term
    res = telescope_extend(ps, 1.2 + 0j)
    assert abs(res.value - 1.0 / (1.2 - 2.0)) <= 10.0 * res.last_term


def test_telescope_flags_divergence(pole_approximants):
    ps, _ = pole_approximants
    res = telescope_extend(ps, 3.0 + 0j)
    assert res.out_of_domain


def test_telescope_inside_K(pole_approximants):
    ps, recs = pole_approximants
    res = telescope_extend(ps, 0.3 + 0j)
    assert not res.out_of_domain
    assert abs(res.value - 1.0 / (0.3 - 2.0)) <= 1e-12


def test_growth_series_bound_frozen_values():
    bound, partial = growth_series_bound(1.0, 1.0)
    assert partial == pytest.approx(1.2912859970626602, abs=1e-14)
    assert bound == pytest.approx(3.8893357220195326, abs=1e-14)
    bound, partial = growth_series_bound(10.0, 2.0)
    assert partial == pytest.approx(40.611732289628804, rel=1e-13)
    assert bound == pytest.approx(252.7097555348307, rel=1e-13)


def test_growth_series_bound_small_a_limits():
    bound, partial = growth_series_bound(1e-9, 1.5)
    assert partial < 1e-5
    assert bound == pytest.approx(1.0, abs=1e-6)


def test_growth_series_partial_never_exceeds_bound():
    rng = np.random.default_rng(808)
    for _ in range(200):
        a = 10.0 ** rng.uniform(-1, 1)
        rho = rng.uniform(0.2, 5.0)
        bound, partial = growth_series_bound(a, rho)
        assert partial <= bound


def test_growth_series_rejects_bad_inputs():
    with pytest.raises(ValueError):
        growth_series_bound(0.0, 1.0)
    with pytest.raises(ValueError):
        growth_series_bound(1.0, -2.0)
    with pytest.raises(ValueError):
        growth_series_bound(math.inf, 1.0)
