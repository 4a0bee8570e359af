"""Model geometries, their exhaustion functions, and graded basis families.

Four concrete models are supported, each a pair (X, psi) of a complex
manifold and a plurisubharmonic exhaustion:

``Classic``
    X = C^N with psi(z) = log ||z||.  The graded spaces are the ordinary
    polynomials: monomials z^alpha of total degree |alpha| <= floor(t).
``MappedPolynomial``
    X = C^N with psi(z) = log sum_j |g_j(z)|^2 for m >= N polynomial maps
    g_1..g_m whose Jacobian has full rank N.  Products g^alpha with
    |alpha| <= floor(2t) span a subspace of the degree-t space (each
    |g_j|^2 <= e^psi gives log|g^alpha| <= (|alpha|/2) psi+ + C), so
    downstream distance values are upper bounds.
``Torus``
    X = C^N / Z^N with psi(z) = ||Im z||.  The characters
    xi_a(z) = exp(2 pi i <z, a>) for lattice vectors a with
    ||a|| <= t / (2 pi) span the degree-t space exactly.
``GraphComplement``
    X = C^N minus the graph {z_N = f(z')} of a polynomial f in the first
    N - 1 variables, with F(z) = z_N - f(z') and
    psi(z) = log(||z'||^2 + |F|^2 + |F|^-2).  Monomials z'^beta F^p with
    p ranging over all integers and |beta| + |p| <= floor(2t) span a
    subspace, with the same upper-bound caveat as the mapped model.

The psi-degree bookkeeping per basis element is |alpha| (Classic),
|alpha| / 2 (MappedPolynomial), 2 pi ||a|| (Torus), and
(|beta| + |p|) / 2 (GraphComplement); every enumerated element b obeys
log|b(z)| <= deg(b) * psi+(z) with constant 0 in exact arithmetic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "CLASSIC",
    "MAPPED",
    "TORUS",
    "GRAPH",
    "DomainError",
    "ModelValidationError",
    "ConfigurationError",
    "Polynomial",
    "ManifoldModel",
    "Point",
    "CompactSample",
    "BasisFunction",
    "FunctionSpec",
    "RationalPole",
    "Exp",
    "TorusGeometricKernel",
    "FourierFinite",
    "PolynomialFn",
    "ExpOfMonomial",
    "classic",
    "mapped_polynomial",
    "torus",
    "graph_complement",
    "make_point",
    "coords_of",
    "psi_value",
    "psi_plus",
    "basis_enumerate",
    "eval_basis",
    "sample_compact",
    "eval_function",
    "default_mesh_size",
]

CLASSIC = "Classic"
MAPPED = "MappedPolynomial"
TORUS = "Torus"
GRAPH = "GraphComplement"

_FLOOR_EPS = 1e-12  # guards floor()/radius cutoffs against float dust in t


class DomainError(ValueError):
    """Evaluation requested at a point outside a function's domain."""


class ModelValidationError(ValueError):
    """Model parameters violate a structural requirement."""


class ConfigurationError(ValueError):
    """A textual descriptor or configuration block cannot be interpreted."""


class Polynomial:
    """Multivariate polynomial with complex coefficients.

    Parameters
    ----------
    coeffs : mapping
        Maps exponent tuples (one nonnegative integer per variable) to
        complex coefficients.  Zero coefficients are dropped.
    nvars : int
        Number of variables.

    Examples
    --------
    >>> p = Polynomial({(2,): 1.0, (0,): -1.0}, nvars=1)   # z^2 - 1
    >>> complex(p(2.0))
    (3+0j)
    """

    __slots__ = ("coeffs", "nvars")

    def __init__(self, coeffs: Mapping[tuple, complex], nvars: int):
        if nvars < 1:
            raise ModelValidationError("polynomial needs at least one variable")
        clean: dict[tuple, complex] = {}
        for exps, c in coeffs.items():
            if isinstance(exps, int):
                exps = (exps,)
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ModelValidationError(
                    f"exponent tuple {exps} does not match nvars={nvars}"
                )
            if any(e < 0 for e in exps):
                raise ModelValidationError(f"negative exponent in {exps}")
            c = complex(c)
            if c != 0:
                clean[exps] = clean.get(exps, 0.0) + c
        self.coeffs = {k: v for k, v in sorted(clean.items()) if v != 0}
        self.nvars = int(nvars)

    @property
    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        return max((sum(e) for e in self.coeffs), default=0)

    def __call__(self, pts):
        """Evaluate at points of shape (..., nvars) or a scalar when nvars=1."""
        arr = np.asarray(pts, dtype=complex)
        if arr.ndim == 0 and self.nvars == 1:
            arr = arr.reshape(1)
        if self.nvars == 1 and arr.ndim == 1 and arr.size != 1:
            arr = arr[:, None]  # batch of scalars for a univariate polynomial
        if arr.shape[-1] != self.nvars:
            raise ValueError(f"expected trailing axis {self.nvars}, got {arr.shape}")
        out = np.zeros(arr.shape[:-1], dtype=complex)
        for exps, c in self.coeffs.items():
            term = np.full(arr.shape[:-1], c, dtype=complex)
            for j, e in enumerate(exps):
                if e:
                    term = term * arr[..., j] ** e
            out = out + term
        return out

    def partial(self, j: int) -> "Polynomial":
        """Partial derivative with respect to variable ``j``."""
        d: dict[tuple, complex] = {}
        for exps, c in self.coeffs.items():
            if exps[j] == 0:
                continue
            new = list(exps)
            new[j] -= 1
            key = tuple(new)
            d[key] = d.get(key, 0.0) + c * exps[j]
        return Polynomial(d, self.nvars)

    def is_coordinate(self, j: int) -> bool:
        """True when the polynomial is exactly the coordinate z_j."""
        want = tuple(1 if k == j else 0 for k in range(self.nvars))
        return self.coeffs == {want: 1.0 + 0.0j}

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Polynomial({self.coeffs!r}, nvars={self.nvars})"


@dataclass(frozen=True)
class ManifoldModel:
    """Descriptor of one of the four supported (X, psi) models.

    Use the factory functions :func:`classic`, :func:`mapped_polynomial`,
    :func:`torus`, and :func:`graph_complement` rather than the raw
    constructor; they validate the kind-specific parameters.
    """

    kind: str
    dimension: int
    maps: tuple = ()               # MappedPolynomial: the polynomials g_1..g_m
    graph_poly: Polynomial | None = None   # GraphComplement: f in N-1 variables

    def describe(self) -> str:
        if self.kind == MAPPED:
            return f"{self.kind}(N={self.dimension}, m={len(self.maps)})"
        if self.kind == GRAPH:
            return f"{self.kind}(N={self.dimension}, deg f={self.graph_poly.degree})"
        return f"{self.kind}(N={self.dimension})"


def classic(dimension: int) -> ManifoldModel:
    """C^N with psi = log ||z||."""
    if dimension < 1:
        raise ModelValidationError("dimension must be >= 1")
    return ManifoldModel(CLASSIC, int(dimension))


def torus(dimension: int) -> ManifoldModel:
    """C^N / Z^N with psi = ||Im z||; real parts are reduced to [0, 1)."""
    if dimension < 1:
        raise ModelValidationError("dimension must be >= 1")
    return ManifoldModel(TORUS, int(dimension))


def mapped_polynomial(maps: Sequence[Polynomial], dimension: int | None = None) -> ManifoldModel:
    """C^N with psi = log sum |g_j|^2 for the given polynomial maps.

    Requires m >= N maps, all in the same N variables.  Jacobian rank is
    checked numerically at seeded probe points; a rank-deficient map
    family is rejected.
    """
    maps = tuple(maps)
    if not maps:
        raise ModelValidationError("at least one map is required")
    n = maps[0].nvars if dimension is None else int(dimension)
    if any(g.nvars != n for g in maps):
        raise ModelValidationError("all maps must share the same variable count")
    if len(maps) < n:
        raise ModelValidationError(f"need m >= N maps, got m={len(maps)} < N={n}")
    model = ManifoldModel(MAPPED, n, maps=maps)
    rng = np.random.default_rng(20240811)
    probes = rng.standard_normal((16, n)) + 1j * rng.standard_normal((16, n))
    _check_jacobian_rank(model, probes)
    return model


def graph_complement(f: Polynomial, dimension: int | None = None) -> ManifoldModel:
    """C^N minus the graph of f, with F(z) = z_N - f(z')."""
    n = f.nvars + 1 if dimension is None else int(dimension)
    if n < 2:
        raise ModelValidationError("graph complement needs dimension >= 2")
    if f.nvars != n - 1:
        raise ModelValidationError(
            f"graph polynomial must have N-1={n - 1} variables, got {f.nvars}"
        )
    return ManifoldModel(GRAPH, n, graph_poly=f)


def _check_jacobian_rank(model: ManifoldModel, pts: np.ndarray) -> None:
    """Numerical full-rank check of the map Jacobian at probe points."""
    partials = [[g.partial(k) for k in range(model.dimension)] for g in model.maps]
    for z in np.atleast_2d(pts):
        jac = np.array([[pj(z) for pj in row] for row in partials], dtype=complex)
        rank = np.linalg.matrix_rank(jac, tol=1e-10)
        if rank < model.dimension:
            raise ModelValidationError(
                f"map Jacobian has rank {rank} < N={model.dimension} at z={z}"
            )


@dataclass(frozen=True)
class Point:
    """A point of a model manifold: N complex coordinates.

    For the torus model the stored representative has real parts in
    [0, 1)^N.  Construct through :func:`make_point` so the kind-specific
    invariants are enforced.
    """

    coords: tuple

    def __len__(self) -> int:
        return len(self.coords)


def coords_of(z) -> np.ndarray:
    """Coerce a Point or array-like to a flat complex coordinate array."""
    if isinstance(z, Point):
        return np.asarray(z.coords, dtype=complex)
    arr = np.asarray(z, dtype=complex)
    return arr.reshape(-1) if arr.ndim == 0 else arr


def make_point(model: ManifoldModel, coords) -> Point:
    """Validate and canonicalize coordinates into a :class:`Point`."""
    arr = coords_of(coords).reshape(-1)
    if arr.size != model.dimension:
        raise ValueError(f"expected {model.dimension} coordinates, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    if model.kind == TORUS:
        arr = arr.real % 1.0 + 1j * arr.imag
    if model.kind == GRAPH:
        fval = model.graph_poly(arr[:-1])
        if arr[-1] - fval == 0:
            raise DomainError("point lies on the removed graph: F(z) = 0")
    return Point(tuple(complex(c) for c in arr))


def _batch(model: ManifoldModel, z) -> np.ndarray:
    """Return coordinates with shape (..., N)."""
    arr = coords_of(z)
    if arr.ndim == 1 and arr.size == model.dimension:
        return arr
    if model.dimension == 1 and arr.ndim == 1:
        return arr[:, None]  # batch of scalars on a 1-dimensional model
    if arr.shape[-1] != model.dimension:
        raise ValueError(f"expected trailing axis {model.dimension}, got {arr.shape}")
    return arr


def psi_value(model: ManifoldModel, z):
    """Exhaustion value psi(z).

    Accepts a single point (Point or length-N array) or a batch with
    shape (..., N); returns a float or an array of matching batch shape.

    Conventions at the singular loci: the Classic model returns -inf at
    the origin (the positive part, which every downstream formula
    consumes, is 0 there); the graph-complement model raises
    :class:`DomainError` at F(z) = 0 for single points, while batch
    evaluation maps such points to +inf so that measure-zero hits inside
    Monte Carlo sampling are excluded rather than fatal.
    """
    arr = _batch(model, z)
    single = arr.ndim == 1
    pts = arr[None, :] if single else arr
    with np.errstate(divide="ignore"):
        if model.kind == CLASSIC:
            out = np.log(np.linalg.norm(pts, axis=-1))
        elif model.kind == MAPPED:
            s = np.zeros(pts.shape[:-1])
            for g in model.maps:
                s = s + np.abs(g(pts)) ** 2
            out = np.log(s)
        elif model.kind == TORUS:
            out = np.linalg.norm(pts.imag, axis=-1)
        elif model.kind == GRAPH:
            f = model.graph_poly
            fval = np.abs(pts[..., -1] - f(pts[..., :-1]))
            if single and np.any(fval == 0):
                raise DomainError("psi undefined on the removed graph: F(z) = 0")
            with np.errstate(divide="ignore", over="ignore"):
                out = np.log(
                    np.linalg.norm(pts[..., :-1], axis=-1) ** 2
                    + fval**2
                    + np.where(fval > 0, fval, 1.0) ** -2.0
                )
                out = np.where(fval > 0, out, np.inf)
        else:  # pragma: no cover
            raise ModelValidationError(f"unknown model kind {model.kind!r}")
    return float(out[0]) if single else out


def psi_plus(model: ManifoldModel, z):
    """Positive part max(0, psi(z)); same shapes as :func:`psi_value`."""
    v = psi_value(model, z)
    return max(0.0, v) if np.isscalar(v) else np.maximum(0.0, v)


# --------------------------------------------------------------------------
# basis enumeration


@dataclass(frozen=True)
class BasisFunction:
    """One enumerated basis element: stable id, psi-degree, exponent data."""

    id: str
    psi_degree: float
    data: tuple


def _multi_indices(nvars: int, total: int) -> Iterator[tuple]:
    """All exponent tuples with the given total degree, lexicographic."""
    if nvars == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _multi_indices(nvars - 1, total - head):
            yield (head,) + rest


def basis_enumerate(model: ManifoldModel, t: float) -> list[BasisFunction]:
    """Enumerate the basis of the degree-t space, graded lexicographically.

    Parameters
    ----------
    t : float
        Target psi-degree, t > 0.

    Returns
    -------
    list of BasisFunction
        Deterministic order: primary key the grading (total degree for
        monomial families, lattice norm for the torus), secondary key the
        exponent data.  The constant 1 (psi-degree 0) is always present.

    Notes
    -----
    Torus: all lattice vectors a with ||a|| <= t / (2 pi), Euclidean
    norm; this is the exact degree-t space.  Classic: monomials with
    |alpha| <= floor(t), exact.  MappedPolynomial and GraphComplement:
    structured monomials as described in the module docstring; these
    span subspaces, so distances computed over them are upper bounds.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    out: list[BasisFunction] = []
    if model.kind == CLASSIC:
        n = int(math.floor(t + _FLOOR_EPS))
        for total in range(n + 1):
            for exps in sorted(_multi_indices(model.dimension, total)):
                out.append(BasisFunction(_mono_id(exps), float(total), exps))
    elif model.kind == MAPPED:
        n = int(math.floor(2.0 * t + _FLOOR_EPS))
        for total in range(n + 1):
            for exps in sorted(_multi_indices(len(model.maps), total)):
                out.append(BasisFunction("g" + _mono_id(exps), total / 2.0, exps))
    elif model.kind == TORUS:
        radius = t / (2.0 * math.pi) + _FLOOR_EPS
        bound = int(math.floor(radius))
        lattice = []
        for a in np.ndindex(*(2 * bound + 1,) * model.dimension):
            vec = tuple(int(k) - bound for k in a)
            norm = math.sqrt(sum(v * v for v in vec))
            if norm <= radius:
                lattice.append((norm, vec))
        lattice.sort(key=lambda item: (round(item[0] ** 2), item[1]))
        for norm, vec in lattice:
            out.append(
                BasisFunction(
                    "xi:" + ",".join(str(v) for v in vec),
                    2.0 * math.pi * norm,
                    vec,
                )
            )
    elif model.kind == GRAPH:
        n = int(math.floor(2.0 * t + _FLOOR_EPS))
        items = []
        for total in range(n + 1):
            for btot in range(total, -1, -1):
                p_abs = total - btot
                powers = [0] if p_abs == 0 else [-p_abs, p_abs]
                for beta in sorted(_multi_indices(model.dimension - 1, btot)):
                    for p in powers:
                        items.append((total, beta, p))
        items.sort()
        for total, beta, p in items:
            bid = "w:" + ",".join(str(b) for b in beta) + ";" + str(p)
            out.append(BasisFunction(bid, total / 2.0, (beta, p)))
    else:  # pragma: no cover
        raise ModelValidationError(f"unknown model kind {model.kind!r}")
    return out


def _mono_id(exps: tuple) -> str:
    return "mono:" + ",".join(str(e) for e in exps)


def eval_basis(model: ManifoldModel, basis: Sequence[BasisFunction], pts) -> np.ndarray:
    """Evaluate basis elements at points.

    Parameters
    ----------
    pts : array-like
        Shape (M, N) or a single point of length N.

    Returns
    -------
    ndarray
        Complex matrix of shape (M, len(basis)); a single input point
        yields shape (len(basis),).
    """
    arr = _batch(model, pts)
    single = arr.ndim == 1
    P = arr[None, :] if single else arr
    M = P.shape[0]
    out = np.empty((M, len(basis)), dtype=complex)
    if model.kind == CLASSIC:
        for k, b in enumerate(basis):
            col = np.ones(M, dtype=complex)
            for j, e in enumerate(b.data):
                if e:
                    col = col * P[:, j] ** e
            out[:, k] = col
    elif model.kind == MAPPED:
        gvals = np.stack([g(P) for g in model.maps], axis=1)  # (M, m)
        for k, b in enumerate(basis):
            col = np.ones(M, dtype=complex)
            for j, e in enumerate(b.data):
                if e:
                    col = col * gvals[:, j] ** e
            out[:, k] = col
    elif model.kind == TORUS:
        A = np.array([b.data for b in basis], dtype=float)  # (K, N)
        out = np.exp(2j * math.pi * (P @ A.T))
    elif model.kind == GRAPH:
        zp = P[:, :-1]
        F = P[:, -1] - model.graph_poly(zp)
        if np.any(F == 0):
            raise DomainError("basis evaluation on the removed graph: F(z) = 0")
        for k, b in enumerate(basis):
            beta, p = b.data
            col = np.ones(M, dtype=complex)
            for j, e in enumerate(beta):
                if e:
                    col = col * zp[:, j] ** e
            if p:
                col = col * F ** p
            out[:, k] = col
    else:  # pragma: no cover
        raise ModelValidationError(f"unknown model kind {model.kind!r}")
    return out[0] if single else out


# --------------------------------------------------------------------------
# compact sets


@dataclass(frozen=True)
class CompactSample:
    """Discretization of a compact set K.

    Attributes
    ----------
    points : ndarray
        Complex array of shape (M, N).
    weights : ndarray
        Strictly positive reals summing to 1, for discrete L2 inner
        products.
    mesh_descriptor : str
        Human-readable generator tag, e.g. ``"chebyshev-1d M=200"``.
    """

    points: np.ndarray
    weights: np.ndarray
    mesh_descriptor: str

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise ValueError("a compact sample needs at least 2 points")
        if w.shape != (pts.shape[0],):
            raise ValueError("one weight per point is required")
        if not np.all(w > 0):
            raise ValueError("weights must be strictly positive")
        if abs(float(w.sum()) - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")
        seen = {tuple(row) for row in pts.round(decimals=14).tolist()}
        if len(seen) != pts.shape[0]:
            raise ValueError("duplicate points in compact sample")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])


def default_mesh_size(t_max: float) -> int:
    """Mesh density rule: max(200, 20 per unit of the largest degree)."""
    return max(200, 20 * int(math.ceil(t_max)))


def sample_compact(spec, model: ManifoldModel, M: int) -> CompactSample:
    """Discretize a benchmark compact set.

    Parameters
    ----------
    spec : str or mapping
        One of: ``"interval [a,b]"`` (real segment, N=1 models),
        ``"circle r=R"``, ``"disc r=R"`` (sunflower grid over the closed
        disc), ``"torus-slice"`` (the real N-torus {Im z = 0}), or a
        mapping ``{"kind": ..., ...}`` with the same options plus
        ``{"kind": "points", "points": [...], "weights": [...]}``.
    M : int
        Requested number of points (>= 2).  The torus slice in dimension
        N > 1 uses the smallest per-axis grid whose size reaches M.

    Returns
    -------
    CompactSample
        Chebyshev-extrema placement for intervals, equispaced points for
        circles and torus slices, uniform weights unless explicit
        weights are supplied.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    kind, params = _parse_k_spec(spec)
    N = model.dimension
    if kind == "interval":
        if N != 1:
            raise ConfigurationError("interval sample requires a 1-dimensional model")
        a, b = params["a"], params["b"]
        if not b > a:
            raise ConfigurationError("interval needs b > a")
        theta = np.arange(M) * math.pi / (M - 1)
        x = 0.5 * (a + b) + 0.5 * (b - a) * -np.cos(theta)  # ascending extrema
        pts = x.astype(complex)[:, None]
        desc = f"chebyshev-1d M={M} on [{a},{b}]"
    elif kind == "circle":
        if N != 1:
            raise ConfigurationError("circle sample requires a 1-dimensional model")
        r = params["radius"]
        ang = 2.0 * math.pi * np.arange(M) / M
        pts = (r * np.exp(1j * ang))[:, None]
        desc = f"circle r={r} M={M}"
    elif kind == "disc":
        if N != 1:
            raise ConfigurationError("disc sample requires a 1-dimensional model")
        r = params["radius"]
        golden = math.pi * (3.0 - math.sqrt(5.0))
        k = np.arange(M)
        rad = r * np.sqrt((k + 0.5) / M)
        pts = (rad * np.exp(1j * golden * k))[:, None]
        desc = f"disc-sunflower r={r} M={M}"
    elif kind == "torus-slice":
        if model.kind != TORUS:
            raise ConfigurationError("torus-slice sample requires the torus model")
        m = M if N == 1 else max(2, int(math.ceil(M ** (1.0 / N))))
        axes = [np.arange(m) / m for _ in range(N)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, N)
        pts = grid.astype(complex)
        desc = f"torus-slice N={N} m={m}"
    elif kind == "points":
        pts = np.asarray(params["points"], dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != N:
            raise ConfigurationError(
                f"explicit points have {pts.shape[1]} coordinates, model has {N}"
            )
        w = params.get("weights")
        if w is not None:
            w = np.asarray(w, dtype=float)
            w = w / w.sum()
            return CompactSample(pts, w, f"explicit M={pts.shape[0]}")
        desc = f"explicit M={pts.shape[0]}"
    else:
        raise ConfigurationError(f"unknown compact-set descriptor {spec!r}")
    if model.kind == GRAPH:
        F = pts[:, -1] - model.graph_poly(pts[:, :-1])
        if np.any(F == 0):
            raise ConfigurationError("sample touches the removed graph: F(z) = 0")
    if model.kind == MAPPED:
        _check_jacobian_rank(model, pts)
    M_actual = pts.shape[0]
    return CompactSample(pts, np.full(M_actual, 1.0 / M_actual), desc)


def _parse_k_spec(spec) -> tuple[str, dict]:
    if isinstance(spec, Mapping):
        kind = str(spec.get("kind", "")).lower().replace("_", "-")
        params = dict(spec)
        params.pop("kind", None)
        if kind == "interval":
            return kind, {"a": float(spec["a"]), "b": float(spec["b"])}
        if kind in ("circle", "disc"):
            return kind, {"radius": float(spec.get("radius", spec.get("r", 1.0)))}
        if kind == "torus-slice":
            return kind, {}
        if kind == "points":
            return kind, params
        raise ConfigurationError(f"unknown compact-set kind {kind!r}")
    if not isinstance(spec, str):
        raise ConfigurationError(f"cannot interpret compact-set spec {spec!r}")
    s = spec.strip().lower()
    nums = [float(x) for x in re.findall(r"[-+]?\d+(?:\.\d*)?(?:e[-+]?\d+)?", s)]
    if s.startswith("interval"):
        if len(nums) != 2:
            raise ConfigurationError(f"interval spec needs two endpoints: {spec!r}")
        return "interval", {"a": nums[0], "b": nums[1]}
    if s.startswith("circle"):
        return "circle", {"radius": nums[0] if nums else 1.0}
    if s.startswith("disc") or s.startswith("disk"):
        return "disc", {"radius": nums[0] if nums else 1.0}
    if s.startswith("torus"):
        return "torus-slice", {}
    raise ConfigurationError(f"unknown compact-set descriptor {spec!r}")


# --------------------------------------------------------------------------
# benchmark target functions


def _first_coord(arr: np.ndarray):
    """First coordinate for 1-dimensional specs: scalar, (M,), or (M, 1)."""
    if arr.ndim >= 2:
        return arr[..., 0]
    return arr[0] if arr.size == 1 else arr


class FunctionSpec:
    """Base class for target functions; instances are callables on points.

    Subclasses may override :meth:`log_abs` with an overflow-safe version
    (used by order/type estimation at large radii).
    """

    def __call__(self, z):  # pragma: no cover - interface
        raise NotImplementedError

    def log_abs(self, z):
        """log |f(z)|, default via direct evaluation."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self(z)))

    def describe(self) -> str:
        return type(self).__name__


class RationalPole(FunctionSpec):
    """f(z) = 1 / (z - a) on one-dimensional models; pole at a."""

    def __init__(self, a: complex):
        self.a = complex(a)

    def __call__(self, z):
        v = _first_coord(coords_of(z))
        d = v - self.a
        if np.any(d == 0):
            raise DomainError(f"evaluation at the pole a={self.a}")
        return 1.0 / d

    def describe(self) -> str:
        return f"RationalPole(a={self.a})"


class Exp(FunctionSpec):
    """f(z) = exp(<c, z>) with a complex coefficient vector c."""

    def __init__(self, c):
        self.c = np.atleast_1d(np.asarray(c, dtype=complex))

    def _inner(self, z):
        arr = coords_of(z)
        if arr.ndim == 1:
            if arr.size == self.c.size:
                return np.sum(self.c * arr)
            if self.c.size == 1:
                return self.c[0] * arr  # batch of scalars
        return arr @ self.c

    def __call__(self, z):
        return np.exp(self._inner(z))

    def log_abs(self, z):
        out = np.real(self._inner(z))
        return float(out) if np.ndim(out) == 0 else out

    def describe(self) -> str:
        return f"Exp(c={self.c.tolist()})"


class TorusGeometricKernel(FunctionSpec):
    """Two-sided geometric Fourier series on the one-dimensional torus.

    f(z) = sum over integers a of exp(-2 pi h |a|) exp(2 pi i a z),
    holomorphic exactly on the strip ||Im z|| < h.  Evaluation sums the
    series with an analytic geometric tail bound below 1e-15 relative.
    """

    def __init__(self, h: float):
        if not h > 0:
            raise ValueError("strip half-width h must be positive")
        self.h = float(h)

    def __call__(self, z):
        v = _first_coord(coords_of(z))
        y = np.max(np.abs(np.imag(np.atleast_1d(v))))
        if y >= self.h:
            raise DomainError(
                f"kernel is holomorphic only on |Im z| < h = {self.h}; got {y}"
            )
        q = math.exp(-2.0 * math.pi * self.h)
        u = np.exp(2j * math.pi * v)
        rp, rm = q * u, q / u
        rmax = max(float(np.max(np.abs(rp))), float(np.max(np.abs(rm))))
        # after n terms the tail is bounded by rmax^(n+1) / (1 - rmax)
        n = max(4, int(math.ceil((-37.0 + math.log1p(-rmax)) / math.log(rmax))))
        total = np.ones_like(u)
        tp, tm = np.ones_like(u), np.ones_like(u)
        for _ in range(n):
            tp = tp * rp
            tm = tm * rm
            total = total + tp + tm
        return total

    def describe(self) -> str:
        return f"TorusGeometricKernel(h={self.h})"


class FourierFinite(FunctionSpec):
    """Finite Fourier sum: f(z) = sum c_a exp(2 pi i <a, z>)."""

    def __init__(self, coeff_map: Mapping):
        items = []
        for a, c in coeff_map.items():
            if isinstance(a, int):
                a = (a,)
            items.append((tuple(int(k) for k in a), complex(c)))
        self.terms = sorted(items)

    def __call__(self, z):
        arr = coords_of(z)
        nvars = len(self.terms[0][0]) if self.terms else 1
        if arr.ndim == 1:
            if arr.size == nvars:
                single = True
                pts = arr[None, :]
            else:  # batch of scalars for a 1-variable sum
                single = False
                pts = arr[:, None]
        else:
            single = False
            pts = arr
        out = np.zeros(pts.shape[0], dtype=complex)
        for a, c in self.terms:
            out = out + c * np.exp(2j * math.pi * (pts @ np.asarray(a, dtype=float)))
        return out[0] if single else out

    def describe(self) -> str:
        return f"FourierFinite({len(self.terms)} terms)"


class PolynomialFn(FunctionSpec):
    """Polynomial target, wrapping :class:`Polynomial`."""

    def __init__(self, poly: Polynomial):
        self.poly = poly

    def __call__(self, z):
        arr = coords_of(z)
        out = self.poly(arr)
        return complex(out) if np.ndim(out) == 0 else out

    def describe(self) -> str:
        return f"PolynomialFn(degree={self.poly.degree})"


class ExpOfMonomial(FunctionSpec):
    """f(z) = exp(c * z^p) on one-dimensional models; order p, type |c|."""

    def __init__(self, power: int, scale: complex = 1.0):
        if power < 1:
            raise ValueError("power must be a positive integer")
        self.power = int(power)
        self.scale = complex(scale)

    def __call__(self, z):
        v = _first_coord(coords_of(z))
        return np.exp(self.scale * v**self.power)

    def log_abs(self, z):
        v = _first_coord(coords_of(z))
        out = np.real(self.scale * v**self.power)
        return float(out) if np.ndim(out) == 0 else out

    def describe(self) -> str:
        return f"ExpOfMonomial(power={self.power}, scale={self.scale})"


def eval_function(f: FunctionSpec, z):
    """Evaluate a function spec at a point or batch of points."""
    return f(z)
