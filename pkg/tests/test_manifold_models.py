"""Model definitions: psi values, basis enumeration, compact sampling."""

import math

import numpy as np
import pytest

import psilab
from psilab.manifold_models import (
    ConfigurationError,
    DomainError,
    ModelValidationError,
    Polynomial,
    basis_enumerate,
    default_mesh_size,
    eval_basis,
    eval_function,
    make_point,
    psi_plus,
    psi_value,
    sample_compact,
)

CLASSIC = psilab.classic(1)
TORUS = psilab.torus(1)


def test_psi_classic_at_one_is_zero():
    assert psi_value(CLASSIC, 1.0 + 0j) == pytest.approx(0.0, abs=1e-15)


def test_psi_classic_origin_sentinel():
    # psi = log|z| diverges at 0; the positive part is what formulas use
    assert psi_value(CLASSIC, 0.0 + 0j) == -math.inf
    assert psi_plus(CLASSIC, 0.0 + 0j) == 0.0


def test_psi_torus_is_imag_norm():
    assert psi_value(TORUS, 0.3 + 2.0j) == pytest.approx(2.0, rel=1e-15)


def test_psi_mapped_single_coordinate():
    m = psilab.mapped_polynomial([Polynomial({(1,): 1.0}, 1)], 1)
    assert psi_value(m, 2.0 + 0j) == pytest.approx(math.log(4.0), rel=1e-15)


def test_psi_graph_rejects_vanishing_graph_distance():
    m = psilab.graph_complement(Polynomial({(2,): 1.0}, 1), 2)
    with pytest.raises(DomainError):
        psi_value(m, (1.0 + 0j, 1.0 + 0j))  # z2 = z1^2 exactly


def test_graph_point_constructor_rejects_graph_locus():
    m = psilab.graph_complement(Polynomial({(2,): 1.0}, 1), 2)
    with pytest.raises(DomainError):
        make_point(m, (2.0 + 0j, 4.0 + 0j))


def test_mapped_requires_enough_coordinates():
    with pytest.raises(ModelValidationError):
        psilab.mapped_polynomial([Polynomial({(1, 0): 1.0}, 2)], 2)  # m=1 < N=2


def test_mapped_rank_deficient_jacobian_rejected():
    # g = (z1, z1^2) never moves the second coordinate: rank 1 < N = 2
    g = [Polynomial({(1, 0): 1.0}, 2), Polynomial({(2, 0): 1.0}, 2)]
    with pytest.raises(ModelValidationError):
        psilab.mapped_polynomial(g, 2)


def test_torus_canonical_representative():
    p = make_point(TORUS, 1.7 + 0.5j)
    assert 0.0 <= p.coords[0].real < 1.0
    assert p.coords[0].real == pytest.approx(0.7, rel=1e-12)
    assert p.coords[0].imag == pytest.approx(0.5, rel=1e-12)


def test_basis_torus_counts():
    assert len(basis_enumerate(TORUS, 2 * math.pi)) == 3  # a in {-1, 0, 1}
    assert len(basis_enumerate(TORUS, math.pi)) == 1  # constant only
    t2 = psilab.torus(2)
    assert len(basis_enumerate(t2, 2 * math.pi)) == 5  # origin + 4 unit vectors


def test_basis_enumeration_is_monotone_in_t():
    for model in (CLASSIC, TORUS):
        prev: set = set()
        for t in (0.5, 1.0, 3.0, 6.5, 12.0):
            ids = {b.id for b in basis_enumerate(model, t)}
            assert prev <= ids
            prev = ids


def test_basis_order_deterministic():
    a = [b.id for b in basis_enumerate(psilab.classic(2), 4.0)]
    b = [b.id for b in basis_enumerate(psilab.classic(2), 4.0)]
    assert a == b


def test_basis_degree_bookkeeping():
    degs = {b.id: b.psi_degree for b in basis_enumerate(TORUS, 2 * math.pi)}
    assert degs["xi:0"] == 0.0
    assert degs["xi:1"] == pytest.approx(2 * math.pi, rel=1e-15)
    m = psilab.mapped_polynomial([Polynomial({(1,): 1.0}, 1)], 1)
    degs_m = {b.id: b.psi_degree for b in basis_enumerate(m, 1.0)}
    # products g^alpha carry psi-degree |alpha| / 2
    assert min(degs_m.values()) == 0.0
    assert max(degs_m.values()) == pytest.approx(1.0)


def test_graph_basis_count_small_degree():
    m = psilab.graph_complement(Polynomial({(2,): 1.0}, 1), 2)
    assert len(basis_enumerate(m, 1.0)) == 9


def test_psi_polynomial_inequality_all_models():
    """Every basis element obeys log|b(z)| <= deg_psi(b) psi+(z)."""
    rng = np.random.default_rng(2024)
    mapped = psilab.mapped_polynomial(
        [Polynomial({(1,): 1.0}, 1), Polynomial({(2,): 0.5}, 1)], 1
    )
    graph = psilab.graph_complement(Polynomial({(2,): 1.0}, 1), 2)
    for model, t in ((CLASSIC, 5.0), (TORUS, 4 * math.pi), (mapped, 3.0), (graph, 2.0)):
        n = model.dimension
        pts = rng.normal(scale=2.0, size=(1000, n)) + 1j * rng.normal(
            scale=1.0, size=(1000, n)
        )
        basis = basis_enumerate(model, t)
        vals = eval_basis(model, basis, pts)
        psis = np.array([psi_plus(model, z) for z in pts])
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(vals))
        for j, b in enumerate(basis):
            excess = logs[:, j] - b.psi_degree * psis
            assert np.nanmax(excess) <= 1e-9, (model.kind, b.id)


def test_psi_is_exhaustion_along_rays():
    rng = np.random.default_rng(7)
    mapped = psilab.mapped_polynomial([Polynomial({(1,): 1.0}, 1)], 1)
    for model in (CLASSIC, TORUS, mapped):
        for _ in range(5):
            d = rng.normal(size=model.dimension) + 1j * rng.normal(size=model.dimension)
            d /= np.linalg.norm(d)
            vals = [psi_value(model, tuple(s * d)) for s in (8.0, 16.0, 32.0, 64.0)]
            assert all(b > a for a, b in zip(vals, vals[1:]))
            assert vals[-1] > 1.0


def test_torus_periodicity():
    rng = np.random.default_rng(99)
    model = psilab.torus(2)
    basis = basis_enumerate(model, 2 * math.pi)
    for _ in range(20):
        z = rng.normal(size=2) + 1j * rng.normal(scale=0.5, size=2)
        for k in range(2):
            shift = np.zeros(2, dtype=complex)
            shift[k] = 1.0
            a = psi_value(model, tuple(z))
            b = psi_value(model, tuple(z + shift))
            assert abs(a - b) <= 1e-12
            va = eval_basis(model, basis, z.reshape(1, -1))[0]
            vb = eval_basis(model, basis, (z + shift).reshape(1, -1))[0]
            assert np.max(np.abs(va - vb)) <= 1e-12


def test_torus_dimension_binomial_bound():
    # lattice count inside the ball of radius n / 2pi vs C(N + n, N)
    for N in (1, 2):
        model = psilab.torus(N)
        for n in range(1, 101, 9):
            dim = len(basis_enumerate(model, float(n)))
            assert dim <= math.comb(N + n, N)


def test_sample_interval_chebyshev_extrema():
    K = sample_compact("interval[-1,1]", CLASSIC, 3)
    xs = sorted(K.points[:, 0].real)
    assert xs == pytest.approx([-1.0, 0.0, 1.0], abs=1e-15)
    assert "chebyshev" in K.mesh_descriptor


def test_sample_circle_roots_of_unity():
    K = sample_compact("circle", CLASSIC, 4)
    got = sorted(K.points[:, 0], key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    want = sorted([1, 1j, -1, -1j], key=lambda z: (z.real, z.imag))
    assert np.allclose(got, want, atol=1e-14)


def test_sample_torus_slice_equispaced():
    K = sample_compact("torus-real", TORUS, 4)
    xs = sorted(K.points[:, 0].real)
    assert xs == pytest.approx([0.0, 0.25, 0.5, 0.75], abs=1e-15)
    assert np.all(K.points.imag == 0.0)


def test_sample_weights_normalized_positive():
    for spec, model in (("interval[-1,1]", CLASSIC), ("circle", CLASSIC), ("torus-real", TORUS)):
        K = sample_compact(spec, model, 37)
        assert K.weights.sum() == pytest.approx(1.0, rel=1e-12)
        assert np.all(K.weights > 0)
        assert len({(round(z[0].real, 14), round(z[0].imag, 14)) for z in K.points}) == 37


def test_sample_errors():
    with pytest.raises(ConfigurationError):
        sample_compact("pentagon", CLASSIC, 8)
    with pytest.raises((ConfigurationError, ValueError)):
        sample_compact("interval[-1,1]", CLASSIC, 1)


def test_default_mesh_rule():
    assert default_mesh_size(3.0) == 200
    assert default_mesh_size(28.0) == 560


def test_eval_rational_pole():
    f = psilab.RationalPole(2.0)
    assert eval_function(f, 0.0 + 0j) == pytest.approx(-0.5, rel=1e-15)
    with pytest.raises(DomainError):
        eval_function(f, 2.0 + 0j)


def test_eval_exp():
    f = psilab.Exp(1.0)
    assert eval_function(f, 0.0 + 0j) == pytest.approx(1.0, rel=1e-15)
    assert eval_function(f, 1.0 + 1.0j) == pytest.approx(np.exp(1.0 + 1.0j), rel=1e-14)


def test_torus_kernel_value_at_zero():
    """Two-sided geometric sum: f(0) = (1 + q) / (1 - q), q = e^{-2 pi h}."""
    h = math.log(2.0)
    q = math.exp(-2 * math.pi * h)
    f = psilab.TorusGeometricKernel(h)
    want = (1 + q) / (1 - q)
    assert eval_function(f, 0.0 + 0j) == pytest.approx(want, rel=1e-14)


def test_torus_kernel_matches_partial_sum():
    h = 0.4
    q = math.exp(-2 * math.pi * h)
    f = psilab.TorusGeometricKernel(h)
    z = 0.3 + 0.1j
    want = sum(
        q ** abs(a) * np.exp(2j * math.pi * a * z) for a in range(-200, 201)
    )
    assert eval_function(f, z) == pytest.approx(want, rel=1e-13)


def test_torus_kernel_requires_positive_h():
    with pytest.raises((ValueError, ConfigurationError)):
        psilab.TorusGeometricKernel(0.0)
