"""Rate extraction, order/type estimation, telescoping extension, tail bound.

A sweep of approximation records (t, d_t) feeds three estimators:

* ``rate_limsup`` fits a line to (t, log d_t) over the usable window and
  reports L_hat = exp(-slope), the finite-sample surrogate of the
  geometric convergence rate.
* ``winiarski_check`` forms s_t = t^(1/rho) d_t^(1/t), fits its plateau,
  and compares with the order/type bound (e sigma rho)^(1/rho).
* ``telescope_extend`` sums p_1 + (p_2 - p_1) + ... at a point outside K,
  implementing holomorphic extension by telescoping increments, with a
  divergence detector instead of an exception when the point lies
  outside the extension domain.

``order_type_estimate`` measures the order rho and type sigma of an
entire function from max-modulus growth over sublevel boundaries, and
``growth_series_bound`` evaluates the closed tail bound
sum_n (a/n)^(n/rho) <= 1 + 2^rho a exp(a / (e rho)) together with the
series' partial sum.

"Usable" everywhere means: the solver converged and d_t sits above the
1e-12 precision floor; floor-flagged and failed records never enter a
fit window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .manifold_models import FunctionSpec, ManifoldModel, psi_plus
from .minimax import PRECISION_FLOOR, ApproxRecord
from .polyspace import PsiPolynomial, poly_eval, poly_sub

__all__ = [
    "RateReport",
    "OrderTypeEstimate",
    "TelescopeResult",
    "usable_records",
    "rate_limsup",
    "winiarski_check",
    "order_type_estimate",
    "telescope_extend",
    "growth_series_bound",
]

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_TOLERANCE = 0.03  # relative verdict tolerance
_MIN_USABLE = 4


@dataclass(frozen=True)
class RateReport:
    """Fitted asymptotics of one sweep.

    For ``rate_limsup``: ``slope_fit`` is the regression slope of
    log d_t against t and ``L_hat = exp(-slope_fit)``.  For
    ``winiarski_check``: ``plateau`` holds the fitted limit of
    t^(1/rho) d_t^(1/t), ``bound`` the order/type bound it is compared
    with, ``slope_fit`` the fitted coefficient of the leading
    (log t) / t correction, and ``L_hat`` repeats the plateau as the
    report's figure of merit.  ``residual`` is the max absolute
    regression residual; ``fit_window`` spans the usable records.
    """

    slope_fit: float
    L_hat: float
    fit_window: tuple
    residual: float
    verdict: str
    n_used: int = 0
    plateau: float | None = None
    bound: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class OrderTypeEstimate:
    """Order/type measurement from max-modulus growth.

    ``rho_hat`` is the slope of log log M(r) against log r over the top
    half of the radius grid; ``sigma_hat`` the largest
    log M(r) / r^rho_hat there.  ``log_max_modulus`` records log M(r)
    per radius (computed overflow-safely).
    """

    rho_hat: float
    sigma_hat: float
    r_grid: tuple
    log_max_modulus: tuple

    def __post_init__(self):
        if len(self.r_grid) < 5:
            raise ValueError("order/type estimation needs at least 5 radii")
        lm = np.asarray(self.log_max_modulus)
        slack = 1e-9 * np.maximum(1.0, np.abs(lm[:-1]))
        if np.any(lm[1:] < lm[:-1] - slack):
            raise ValueError("max-modulus sequence is not monotone")


@dataclass(frozen=True)
class TelescopeResult:
    """Telescoping-sum evaluation at one point.

    ``last_term`` is the magnitude of the final increment (the
    convergence indicator).  ``out_of_domain`` reports detected
    divergence: increments growing for three consecutive steps.
    """

    value: complex
    last_term: float
    n_terms: int
    out_of_domain: bool


def usable_records(records: Sequence[ApproxRecord]) -> list[ApproxRecord]:
    """Records that converged with d above the precision floor."""
    return [
        r
        for r in records
        if r.converged and math.isfinite(r.d_value) and r.d_value > PRECISION_FLOOR
    ]


def rate_limsup(
    records: Sequence[ApproxRecord],
    L_true: float | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> RateReport:
    """Least-squares line through (t, log d_t) over the usable records.

    Returns verdict PASS when ``L_hat >= L_true (1 - tolerance)`` (the
    rate theorem is one-sided: observed decay must be at least as fast
    as the analytic rate), FAIL when it is not, and INCONCLUSIVE with
    fewer than 4 usable records or when no reference is supplied.
    """
    usable = usable_records(records)
    if len(usable) < _MIN_USABLE:
        # L_hat must stay positive even without a verdict; 2..3 records
        # still give a (context-only) line, fewer fall back to flat
        if len(usable) >= 2:
            ts = np.array([r.t for r in usable])
            logd = np.log(np.array([r.d_value for r in usable]))
            slope = float(np.polyfit(ts, logd, 1)[0])
            window = (float(ts.min()), float(ts.max()))
        else:
            slope, window = 0.0, (0.0, 0.0)
        return RateReport(
            slope_fit=slope,
            L_hat=math.exp(-slope),
            fit_window=window,
            residual=0.0,
            verdict=INCONCLUSIVE,
            n_used=len(usable),
            detail=f"only {len(usable)} usable records; need {_MIN_USABLE}",
        )
    ts = np.array([r.t for r in usable])
    logd = np.log(np.array([r.d_value for r in usable]))
    slope, intercept = np.polyfit(ts, logd, 1)
    resid = float(np.max(np.abs(slope * ts + intercept - logd)))
    L_hat = math.exp(-slope)
    if L_true is None:
        verdict, detail = INCONCLUSIVE, "no reference rate supplied"
    elif L_hat >= L_true * (1.0 - tolerance):
        verdict, detail = PASS, ""
    else:
        verdict, detail = FAIL, f"L_hat={L_hat:.6g} below {L_true} - {tolerance:.0%}"
    return RateReport(
        slope_fit=float(slope),
        L_hat=float(L_hat),
        fit_window=(float(ts.min()), float(ts.max())),
        residual=resid,
        verdict=verdict,
        n_used=len(usable),
        detail=detail,
    )


def winiarski_check(
    records: Sequence[ApproxRecord],
    rho: float,
    sigma: float,
    tolerance: float = DEFAULT_TOLERANCE,
) -> RateReport:
    """Plateau of s_t = t^(1/rho) d_t^(1/t) against (e sigma rho)^(1/rho).

    The sequence converges like exp(c0 + c1 (log t)/t + c2/t), so the
    plateau is estimated by regressing log s_t on {1, (log t)/t, 1/t}
    over the top usable window (the later 60 percent of usable records,
    at least 4).  PASS when plateau <= bound (1 + tolerance).
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    usable = usable_records(records)
    if len(usable) < _MIN_USABLE:
        return RateReport(
            slope_fit=0.0,
            L_hat=1.0,
            fit_window=(0.0, 0.0),
            residual=0.0,
            verdict=INCONCLUSIVE,
            n_used=len(usable),
            detail=f"only {len(usable)} usable records; need {_MIN_USABLE}",
        )
    n_win = max(_MIN_USABLE, math.ceil(0.6 * len(usable)))
    window = usable[-n_win:]
    ts = np.array([r.t for r in window])
    log_s = np.log(ts) / rho + np.log(np.array([r.d_value for r in window])) / ts
    basis = np.column_stack([np.ones_like(ts), np.log(ts) / ts, 1.0 / ts])
    coef, *_ = np.linalg.lstsq(basis, log_s, rcond=None)
    fitted = basis @ coef
    resid = float(np.max(np.abs(fitted - log_s)))
    plateau = math.exp(coef[0])
    bound = (math.e * sigma * rho) ** (1.0 / rho)
    verdict = PASS if plateau <= bound * (1.0 + tolerance) else FAIL
    return RateReport(
        slope_fit=float(coef[1]),
        L_hat=float(plateau),
        fit_window=(float(ts.min()), float(ts.max())),
        residual=resid,
        verdict=verdict,
        n_used=len(window),
        plateau=float(plateau),
        bound=float(bound),
        detail="" if verdict == PASS else f"plateau {plateau:.6g} exceeds bound {bound:.6g}",
    )


def order_type_estimate(
    f: FunctionSpec,
    model: ManifoldModel,
    phi: Callable[[np.ndarray], float] | None,
    r_grid: Sequence[float],
    n_directions: int = 512,
) -> OrderTypeEstimate:
    """Order and type from max-modulus growth over sublevel boundaries.

    Parameters
    ----------
    phi : callable or None
        Growth gauge; the boundary of {phi <= log r} is sampled along
        rays from the origin.  None uses the model's psi+ as the gauge.
    r_grid : increasing sequence, at least 5 radii.

    Notes
    -----
    M(r) is maximized over ``n_directions`` boundary points;
    ``f.log_abs`` keeps the evaluation finite for exponential targets.
    Fits use the top half of the grid (growth estimates are asymptotic;
    small radii bias the order downward).
    """
    rs = [float(r) for r in r_grid]
    if len(rs) < 5 or any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("r_grid must be increasing with at least 5 radii")
    if phi is None:
        phi = lambda pts: psi_plus(model, pts)
    N = model.dimension
    if N == 1:
        ang = 2.0 * math.pi * np.arange(n_directions) / n_directions
        dirs = np.exp(1j * ang)[:, None]
    else:
        rng = np.random.default_rng(58121)  # fixed: estimates stay deterministic
        raw = rng.standard_normal((n_directions, N)) + 1j * rng.standard_normal((n_directions, N))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    log_M = []
    for r in rs:
        target = math.log(r)
        lo = np.full(dirs.shape[0], 1e-9)
        hi = np.full(dirs.shape[0], 1.0)
        # grow the bracket until phi exceeds the target along every ray
        for _ in range(200):
            vals = np.asarray(phi(hi[:, None] * dirs), dtype=float)
            todo = vals < target
            if not np.any(todo):
                break
            lo[todo] = hi[todo]
            hi[todo] *= 2.0
        else:
            raise ValueError("sublevel boundary not found along some ray")
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            vals = np.asarray(phi(mid[:, None] * dirs), dtype=float)
            takes = vals < target
            lo[takes] = mid[takes]
            hi[~takes] = mid[~takes]
        boundary = (0.5 * (lo + hi))[:, None] * dirs
        log_M.append(float(np.max(np.asarray(f.log_abs(boundary), dtype=float))))
    top = slice(len(rs) // 2, None)
    xs = np.log(np.array(rs)[top])
    lm = np.array(log_M)[top]
    if np.any(lm <= 0):
        raise ValueError("max modulus must exceed 1 on the top half of the radius grid")
    slope, _ = np.polyfit(xs, np.log(lm), 1)
    rho_hat = max(0.0, float(slope))
    with np.errstate(over="ignore"):
        denom = np.array(rs)[top] ** max(rho_hat, 1e-300)
    sigma_hat = float(np.max(lm / denom))
    return OrderTypeEstimate(
        rho_hat=rho_hat,
        sigma_hat=sigma_hat,
        r_grid=tuple(rs),
        log_max_modulus=tuple(float(v) for v in log_M),
    )


def telescope_extend(
    p_list: Sequence[PsiPolynomial],
    z,
    term_floor: float = 1e-12,
    growth_ratio: float = 1.2,
    growth_steps: int = 3,
) -> TelescopeResult:
    """Evaluate the telescoping extension p_1 + sum (p_k - p_(k-1)) at z.

    Parameters
    ----------
    p_list : approximants from a sweep, increasing degree.
    term_floor : float
        Summation stops once an increment's magnitude falls below this.
    growth_ratio, growth_steps :
        Divergence detector: if |increment| grows by more than
        ``growth_ratio`` for ``growth_steps`` consecutive steps, the
        point is reported as outside the extension domain (flag, not
        exception).  The ratio margin keeps noise-floor increments from
        tripping the detector.
    """
    if not p_list:
        raise ValueError("p_list must not be empty")
    total = complex(poly_eval(p_list[0], z))
    prev_mag = abs(total)
    last = prev_mag
    growths = 0
    out_of_domain = False
    n = 1
    for prev, cur in zip(p_list, p_list[1:]):
        term = complex(poly_eval(poly_sub(cur, prev), z))
        mag = abs(term)
        total += term
        n += 1
        last = mag
        if mag > growth_ratio * prev_mag > 0:
            growths += 1
            if growths >= growth_steps:
                out_of_domain = True
                break
        else:
            growths = 0
        prev_mag = mag
        if mag < term_floor:
            break
    return TelescopeResult(value=total, last_term=last, n_terms=n, out_of_domain=out_of_domain)


def growth_series_bound(a: float, rho: float) -> tuple[float, float]:
    """Tail bound and partial sum of sum_n (a/n)^(n/rho).

    Returns
    -------
    (bound, partial_sum)
        ``bound = 1 + 2^rho a exp(a / (e rho))``; the partial sum is
        truncated once the tail is below 1e-12 (past n > 2^rho a the
        terms decay at least geometrically with ratio 1/2).  Both are
        computed through logarithms, so extreme inputs overflow to inf
        rather than raising.
    """
    if not (a > 0 and rho > 0 and math.isfinite(a) and math.isfinite(rho)):
        raise ValueError("a and rho must be positive and finite")
    log_bound_term = rho * math.log(2.0) + math.log(a) + a / (math.e * rho)
    bound = 1.0 + (math.exp(log_bound_term) if log_bound_term < 709.0 else math.inf)
    geo_start = (2.0**rho) * a if rho * math.log(2.0) < 700 else math.inf
    partial = 0.0
    n = 0
    while True:
        n += 1
        log_term = (n / rho) * (math.log(a) - math.log(n))
        term = math.exp(log_term) if log_term < 709.0 else math.inf
        partial += term
        if math.isinf(partial):
            break
        if n >= geo_start and term < 0.5e-12:
            break
        if n > 10_000_000:  # structural safety net; unreachable for sane inputs
            break
    return bound, partial
