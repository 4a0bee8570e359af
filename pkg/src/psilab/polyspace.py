"""Coefficient-vector representation of graded polynomials.

A :class:`PsiPolynomial` stores complex coefficients over an enumerated
basis of its model.  Arithmetic merges bases by element id; the degree is
recomputed from surviving coefficients so exact cancellations do not
inflate it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .manifold_models import BasisFunction, ManifoldModel, basis_enumerate, eval_basis

__all__ = [
    "PsiPolynomial",
    "zero_polynomial",
    "poly_eval",
    "poly_add",
    "poly_sub",
    "poly_scale",
    "space_dimension",
    "poly_to_record",
]

# coefficients at or below this magnitude are treated as dead after arithmetic
_COEFF_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class PsiPolynomial:
    """A polynomial of the model's graded family, stored densely.

    Attributes
    ----------
    model : ManifoldModel
    basis : tuple of BasisFunction
        Ordered basis elements; ids are unique.
    coeffs : ndarray
        Complex vector, same length as ``basis``.
    """

    model: ManifoldModel
    basis: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (len(self.basis),):
            raise ValueError("one coefficient per basis element is required")
        object.__setattr__(self, "coeffs", c)

    @property
    def psi_degree(self) -> float:
        """Largest psi-degree carried by a live coefficient; 0 when empty."""
        live = [b.psi_degree for b, c in zip(self.basis, self.coeffs) if abs(c) > _COEFF_FLOOR]
        return max(live, default=0.0)


def zero_polynomial(model: ManifoldModel) -> PsiPolynomial:
    """The zero polynomial (empty basis, psi-degree 0)."""
    return PsiPolynomial(model, (), np.zeros(0, dtype=complex))


def poly_eval(p: PsiPolynomial, z):
    """Evaluate sum_j c_j b_j(z); numpy pairwise summation over terms.

    Accepts a single point or a batch of shape (M, N).
    """
    if len(p.basis) == 0:
        arr = np.asarray(z)
        if arr.ndim >= 2:
            return np.zeros(arr.shape[0], dtype=complex)
        return 0j
    vals = eval_basis(p.model, p.basis, z)
    if vals.ndim == 1:
        return complex(np.sum(vals * p.coeffs))
    return np.sum(vals * p.coeffs, axis=1)


def _merge(p: PsiPolynomial, q: PsiPolynomial, sign: complex) -> PsiPolynomial:
    if p.model != q.model:
        raise ValueError("polynomials live on different models")
    by_id: dict[str, tuple[BasisFunction, complex]] = {}
    for b, c in zip(p.basis, p.coeffs):
        by_id[b.id] = (b, c)
    for b, c in zip(q.basis, q.coeffs):
        prev = by_id.get(b.id)
        by_id[b.id] = (b, (prev[1] if prev else 0.0) + sign * c)
    merged = sorted(by_id.values(), key=lambda bc: (bc[0].psi_degree, bc[0].id))
    basis = tuple(b for b, _ in merged)
    coeffs = np.array([c for _, c in merged], dtype=complex)
    return PsiPolynomial(p.model, basis, coeffs)


def poly_add(p: PsiPolynomial, q: PsiPolynomial) -> PsiPolynomial:
    """Coefficientwise sum over the merged basis."""
    return _merge(p, q, 1.0)


def poly_sub(p: PsiPolynomial, q: PsiPolynomial) -> PsiPolynomial:
    """Coefficientwise difference over the merged basis."""
    return _merge(p, q, -1.0)


def poly_scale(p: PsiPolynomial, c: complex) -> PsiPolynomial:
    """Scalar multiple."""
    return PsiPolynomial(p.model, p.basis, p.coeffs * complex(c))


def space_dimension(model: ManifoldModel, t: float) -> int:
    """Dimension of the degree-t space (length of its enumerated basis)."""
    return len(basis_enumerate(model, t))


def poly_to_record(p: PsiPolynomial) -> dict:
    """Serializable record: basis ids plus (re, im) coefficient pairs."""
    return {
        "basis_ids": [b.id for b in p.basis],
        "coeffs": [[float(c.real), float(c.imag)] for c in p.coeffs],
        "psi_degree": float(p.psi_degree),
        "model": p.model.describe(),
    }
