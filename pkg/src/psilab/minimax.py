"""Discrete best uniform approximation by Lawson's reweighted least squares.

The solver computes d_K(f, P_t) = inf over p in the degree-t space of
max_i |f(x_i) - p(x_i)| on a weighted sample of K.  Lawson's fixed-point
iteration solves a weighted least-squares problem, multiplies the weights
by the residual moduli, renormalizes, and repeats; the iterates converge
to the discrete minimax solution for linear families, complex targets
included.  Each visited weight vector w yields the valid lower bound
sum_i w_i |r_i(w)| <= d_K, where r(w) is the w-optimal least-squares
residual, so every solve returns a certified bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .manifold_models import (
    CompactSample,
    FunctionSpec,
    ManifoldModel,
    basis_enumerate,
    eval_basis,
    eval_function,
)
from .polyspace import PsiPolynomial, poly_add, zero_polynomial

__all__ = [
    "ApproxProblem",
    "ApproxSolution",
    "ApproxRecord",
    "OrthoResult",
    "orthonormalize",
    "solve_minimax",
    "build_problem",
    "approx_sweep",
    "records_to_csv",
    "CSV_COLUMNS",
]

PRECISION_FLOOR = 1e-12   # d values at or below this are flagged as floor noise
_WEIGHT_FLOOR = 1e-300    # keeps Lawson support from collapsing permanently
_PIVOT_TOL = 1e-12        # relative column-norm cutoff for rank decisions

CSV_COLUMNS = ("t", "dim", "d_value", "lower_bound", "iterations", "converged", "floor_flag")


@dataclass(frozen=True)
class ApproxProblem:
    """One discrete approximation problem.

    Attributes
    ----------
    sample : CompactSample
    target : ndarray
        f at the sample points, shape (M,).
    basis_matrix : ndarray
        Basis values at the sample points, shape (M, dim).
    t : float
        psi-degree of the approximating space.
    """

    sample: CompactSample
    target: np.ndarray
    basis_matrix: np.ndarray
    t: float

    def __post_init__(self):
        tgt = np.asarray(self.target, dtype=complex)
        B = np.asarray(self.basis_matrix, dtype=complex)
        M = self.sample.size
        if tgt.shape != (M,):
            raise ValueError("target must hold one value per sample point")
        if B.ndim != 2 or B.shape[0] != M:
            raise ValueError("basis matrix rows must match the sample")
        if not (np.all(np.isfinite(tgt)) and np.all(np.isfinite(B))):
            raise ValueError("non-finite entries in approximation problem")
        object.__setattr__(self, "target", tgt)
        object.__setattr__(self, "basis_matrix", B)


@dataclass(frozen=True)
class ApproxSolution:
    """Solver output: coefficients over the problem's basis plus a bracket.

    ``lower_bound <= d_value`` always; ``d_value`` also never exceeds the
    sup-norm residual of the plain least-squares fit (the first iterate).
    """

    coeffs: np.ndarray
    d_value: float
    lower_bound: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class ApproxRecord:
    """One sweep entry: degree, space dimension, bracket, diagnostics.

    ``approximant`` carries the accumulated best approximant p_t for
    telescoping; it is omitted from CSV serialization.
    """

    t: float
    dim: int
    d_value: float
    lower_bound: float
    iterations: int
    converged: bool
    floor_flag: bool
    approximant: PsiPolynomial | None = None


class OrthoResult(NamedTuple):
    """Weighted QR factorization with rank bookkeeping.

    ``Q`` has orthonormal columns in the inner product
    <u, v> = sum_i w_i u_i conj(v_i) and ``basis_matrix ~= Q @ R``.
    ``kept`` lists the input columns that survived the rank cutoff;
    ``effective_dim == len(kept)``.
    """

    Q: np.ndarray
    R: np.ndarray
    effective_dim: int
    kept: tuple


def orthonormalize(basis_matrix, weights, pivot_tol: float = _PIVOT_TOL) -> OrthoResult:
    """Modified Gram-Schmidt with reorthogonalization under a weighted inner product.

    Columns whose residual norm falls below ``pivot_tol`` times the largest
    original column norm are reported as dependent and dropped; computation
    proceeds on the reduced space.

    Parameters
    ----------
    basis_matrix : array-like, shape (M, K)
    weights : array-like, shape (M,)
        Strictly positive.

    Returns
    -------
    OrthoResult
    """
    B = np.asarray(basis_matrix, dtype=complex)
    w = np.asarray(weights, dtype=float)
    if B.ndim != 2 or w.shape != (B.shape[0],):
        raise ValueError("need a (M, K) matrix and M weights")
    if not np.all(w > 0):
        raise ValueError("weights must be strictly positive")
    M, K = B.shape
    norms0 = np.sqrt(np.einsum("i,ik->k", w, np.abs(B) ** 2).real)
    ref = float(np.max(norms0)) if K else 0.0
    Q = np.empty((M, min(M, K)), dtype=complex)
    R = np.zeros((min(M, K), K), dtype=complex)
    kept: list[int] = []
    r = 0
    for k in range(K):
        v = B[:, k].copy()
        # two projection passes: twice is enough for orthogonality at roundoff
        for _ in range(2):
            if r:
                c = Q[:, :r].conj().T @ (w * v)
                v -= Q[:, :r] @ c
                R[:r, k] += c
        nrm = math.sqrt(float(np.sum(w * np.abs(v) ** 2)))
        if nrm <= pivot_tol * ref:
            continue  # dependent column: represented by earlier ones
        Q[:, r] = v / nrm
        R[r, k] = nrm
        kept.append(k)
        r += 1
    return OrthoResult(Q[:, :r], R[:r, :], r, tuple(kept))


def solve_minimax(problem: ApproxProblem, tol: float = 1e-10, max_iter: int = 500) -> ApproxSolution:
    """Lawson iteration for the discrete minimax problem.

    Parameters
    ----------
    tol : float
        Stop when the max residual modulus changes by less than
        ``tol`` relatively between iterations.
    max_iter : int
        Iteration cap; on hitting it the best iterate is returned with
        ``converged=False`` (callers must check).

    Returns
    -------
    ApproxSolution
        ``d_value`` is the smallest max-residual over all iterates,
        ``lower_bound`` the largest dual value sum_i w_i |r_i| seen, and
        ``coeffs`` the coefficients of the best iterate over the
        problem's basis (dropped dependent columns get coefficient 0).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    B = problem.basis_matrix
    f = problem.target
    wq = problem.sample.weights
    ortho = orthonormalize(B, wq)
    Q, R, kept = ortho.Q, ortho.R, ortho.kept
    scale = max(1.0, float(np.max(np.abs(f))))

    w = wq.copy()
    best_a = np.zeros(ortho.effective_dim, dtype=complex)
    best_d = math.inf
    lower = 0.0
    d_prev = math.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        sw = np.sqrt(w)
        A = sw[:, None] * Q
        qh, rh = np.linalg.qr(A)
        rhs = qh.conj().T @ (sw * f)
        a = np.linalg.solve(rh, rhs) if ortho.effective_dim else rhs[:0]
        resid = f - Q @ a
        absr = np.abs(resid)
        dk = float(np.max(absr)) if absr.size else 0.0
        lower = max(lower, float(np.sum(w * absr)))
        if dk < best_d:
            best_d = dk
            best_a = a
        if abs(dk - d_prev) <= tol * dk + 1e-15 * scale:
            converged = True
            break
        d_prev = dk
        w = w * absr
        s = float(w.sum())
        if s <= 0.0:
            converged = True  # exact fit: all residuals vanished
            break
        w = np.maximum(w / s, _WEIGHT_FLOOR)

    lower = min(lower, best_d)  # guard the bracket against roundoff crossover
    coeffs = np.zeros(B.shape[1], dtype=complex)
    if ortho.effective_dim:
        Rk = R[:, list(kept)]
        coeffs[list(kept)] = np.linalg.solve(Rk, best_a)
    return ApproxSolution(
        coeffs=coeffs,
        d_value=best_d,
        lower_bound=lower,
        iterations=it,
        converged=converged,
    )


def build_problem(model: ManifoldModel, K: CompactSample, f, t: float) -> ApproxProblem:
    """Assemble the (M, dim) basis matrix and target vector for degree t.

    ``f`` may be a FunctionSpec or an array of values on K's points.
    """
    basis = basis_enumerate(model, t)
    B = eval_basis(model, basis, K.points)
    if isinstance(f, FunctionSpec):
        target = np.asarray(eval_function(f, K.points), dtype=complex)
    else:
        target = np.asarray(f, dtype=complex)
    return ApproxProblem(sample=K, target=target, basis_matrix=B, t=float(t))


def approx_sweep(
    model: ManifoldModel,
    K: CompactSample,
    f: FunctionSpec,
    t_list: Sequence[float],
    tol: float = 1e-10,
    max_iter: int = 500,
) -> list[ApproxRecord]:
    """Solve the approximation problem along an increasing degree grid.

    Each degree is solved as a correction against the previous best
    approximant: the space at t contains the space at any smaller t, so
    minimizing over the full degree-t basis applied to the residual
    f - p_prev reaches the same optimum as an independent solve, while
    the stored increments stay relatively accurate for telescoping.

    Returns
    -------
    list of ApproxRecord
        One per degree.  Records with d_value <= 1e-12 carry
        ``floor_flag=True`` (below-precision-floor).  A solver failure at
        one degree is recorded (d_value = nan, converged=False) without
        aborting the sweep.
    """
    ts = [float(t) for t in t_list]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_list must be strictly increasing")
    pts = K.points
    fvals = np.asarray(eval_function(f, pts), dtype=complex)
    acc_vals = np.zeros_like(fvals)
    acc_poly = zero_polynomial(model)
    records: list[ApproxRecord] = []
    for t in ts:
        basis = basis_enumerate(model, t)
        try:
            B = eval_basis(model, basis, pts)
            prob = ApproxProblem(sample=K, target=fvals - acc_vals, basis_matrix=B, t=t)
            sol = solve_minimax(prob, tol=tol, max_iter=max_iter)
        except Exception:
            records.append(
                ApproxRecord(
                    t=t,
                    dim=len(basis),
                    d_value=float("nan"),
                    lower_bound=float("nan"),
                    iterations=0,
                    converged=False,
                    floor_flag=False,
                )
            )
            continue
        increment = PsiPolynomial(model, tuple(basis), sol.coeffs)
        acc_poly = poly_add(acc_poly, increment)
        acc_vals = acc_vals + B @ sol.coeffs
        records.append(
            ApproxRecord(
                t=t,
                dim=len(basis),
                d_value=sol.d_value,
                lower_bound=sol.lower_bound,
                iterations=sol.iterations,
                converged=sol.converged,
                floor_flag=sol.d_value <= PRECISION_FLOOR,
                approximant=acc_poly,
            )
        )
    return records


def records_to_csv(records: Sequence[ApproxRecord]) -> str:
    """Render sweep records as CSV (fixed column order, LF, '.' decimal)."""
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(
            ",".join(
                [
                    repr(float(r.t)),
                    str(int(r.dim)),
                    repr(float(r.d_value)),
                    repr(float(r.lower_bound)),
                    str(int(r.iterations)),
                    "true" if r.converged else "false",
                    "true" if r.floor_flag else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"
