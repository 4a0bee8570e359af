"""Polynomial space algebra: evaluation, subtraction, dimensions."""

import math

import numpy as np
import pytest

import psilab
from psilab.manifold_models import basis_enumerate, eval_basis
from psilab.polyspace import (
    PsiPolynomial,
    poly_eval,
    poly_scale,
    poly_sub,
    poly_to_record,
    space_dimension,
    zero_polynomial,
)

CLASSIC = psilab.classic(1)
TORUS = psilab.torus(1)


def _poly(model, basis, coeffs):
    return PsiPolynomial(model, tuple(basis), np.asarray(coeffs, dtype=complex))


def _classic_poly(coeff_by_power):
    basis = basis_enumerate(CLASSIC, max(coeff_by_power))
    coeffs = [complex(coeff_by_power.get(k, 0.0)) for k in range(len(basis))]
    return _poly(CLASSIC, basis, coeffs)


def test_eval_torus_character():
    basis = basis_enumerate(TORUS, 2 * math.pi)
    xi1 = _poly(TORUS, [b for b in basis if b.id == "xi:1"], [1.0 + 0j])
    # e^{2 pi i z} at z = i
    assert poly_eval(xi1, 1j) == pytest.approx(math.exp(-2 * math.pi), rel=1e-14)


def test_eval_zero_polynomial():
    z = zero_polynomial(CLASSIC)
    assert poly_eval(z, 3.7 + 0.2j) == 0
    assert z.psi_degree == 0.0


def test_eval_classic_quadratic():
    p = _classic_poly({0: -1.0, 2: 1.0})  # z^2 - 1
    assert poly_eval(p, 2.0 + 0j) == pytest.approx(3.0, rel=1e-15)
    assert p.psi_degree == pytest.approx(2.0)


def test_sub_cancels_to_zero():
    p = _classic_poly({0: 1.5, 1: -2.0, 2: 0.25})
    d = poly_sub(p, p)
    assert d.psi_degree == 0.0
    assert poly_eval(d, 1.1 + 0.3j) == 0


def test_sub_drops_leading_term():
    a = _classic_poly({2: 1.0})
    b = _classic_poly({0: -1.0, 2: 1.0})
    d = poly_sub(a, b)
    assert poly_eval(d, 5.0 + 0j) == pytest.approx(1.0, rel=1e-15)
    assert d.psi_degree == 0.0


def test_sub_keeps_highest_surviving_degree():
    basis = basis_enumerate(TORUS, 2 * math.pi)
    by_id = {b.id: b for b in basis}
    a = _poly(TORUS, [by_id["xi:1"], by_id["xi:0"]], [1.0, 1.0])
    b = _poly(TORUS, [by_id["xi:0"]], [1.0])
    d = poly_sub(a, b)
    assert d.psi_degree == pytest.approx(2 * math.pi, rel=1e-15)


def test_space_dimensions():
    assert space_dimension(TORUS, 2 * math.pi) == 3
    assert space_dimension(TORUS, math.pi) == 1
    assert space_dimension(psilab.classic(2), 3.0) == 10


def test_space_dimension_nondecreasing():
    dims = [space_dimension(CLASSIC, t) for t in np.linspace(0.1, 12.0, 40)]
    assert all(b >= a for a, b in zip(dims, dims[1:]))


def test_vector_space_axioms():
    rng = np.random.default_rng(31)
    basis = basis_enumerate(CLASSIC, 4.0)
    c1 = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    c2 = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    p1 = _poly(CLASSIC, basis, c1)
    p2 = _poly(CLASSIC, basis, c2)
    zs = rng.normal(size=16) + 1j * rng.normal(size=16)
    s = 0.7 - 0.2j
    for z in zs:
        lhs = poly_eval(poly_sub(poly_scale(p1, s), p2), z)
        rhs = s * poly_eval(p1, z) - poly_eval(p2, z)
        assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-13)


def test_poly_eval_matches_basis_matrix():
    rng = np.random.default_rng(5150)
    for model, t in ((CLASSIC, 5.0), (TORUS, 4 * math.pi)):
        basis = basis_enumerate(model, t)
        c = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        p = _poly(model, basis, c)
        pts = rng.normal(size=(32, 1)) + 1j * rng.normal(scale=0.3, size=(32, 1))
        mat = eval_basis(model, basis, pts)
        direct = mat @ c
        for z, want in zip(pts, direct):
            assert poly_eval(p, z) == pytest.approx(want, rel=1e-13, abs=1e-13)


def test_record_round_trip_keys():
    p = _classic_poly({0: 1.0, 3: 2.0})
    rec = poly_to_record(p)
    assert set(rec) == {"basis_ids", "coeffs", "model", "psi_degree"}
    assert rec["psi_degree"] == pytest.approx(3.0)
    assert len(rec["basis_ids"]) == len(rec["coeffs"])


def test_polynomials_are_frozen():
    p = _classic_poly({1: 1.0})
    with pytest.raises((AttributeError, TypeError)):
        p.coeffs = None
