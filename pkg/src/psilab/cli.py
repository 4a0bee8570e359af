"""Experiment runner: config in, reproducible reports out.

Subcommands map one-to-one onto the library's audits:

* ``approx``      sweep only, records to CSV
* ``bws``         sweep + geometric-rate verdict against L_true
* ``winiarski``   sweep + order/type + plateau verdict
* ``extremal``    pointwise extremal-function grid + reference values
* ``curvature``   compensator audit + eigenvalue tables
* ``volume``      sublevel volumes and growth fit over an L-grid
* ``extend``      telescoping evaluation at points outside K

Configuration is a JSON document; every report embeds the resolved
config and the library version, contains no timestamps, and is written
with sorted keys, so identical config + seed gives byte-identical
bytes.  Exit status: 0 when every verdict passes (or the subcommand
renders none), 2 when any verdict is INCONCLUSIVE, 1 on FAIL or error.

Config layout (blocks used depend on the subcommand)::

    {
      "model":    {"kind": "classic" | "torus" | "mapped" | "graph", ...},
      "K":        {"kind": "interval", "a": -1.0, "b": 1.0},
      "function": {"kind": "rational_pole", "a": 2.0},
      "t_list":   [4, 6, 8],            or "t_min"/"t_max"/"t_step",
      "L_true":   3.732,                verdict block, bws only
      "order_type": {"rho": 1, "sigma": 1, "r_grid": [...]},  winiarski
      "compensator": {"theta": {...}, "points": [...]},       curvature
      "seed":     1234,
      "tolerance": 0.03,
      "mesh_size": 400,
      "output_prefix": "report"
    }

Exactly one verdict block is allowed, and only for the subcommand that
consumes it.  Polynomials are written as {"nvars": n, "coeffs":
{"2,0": [re, im], ...}} with comma-separated exponent keys; complex
scalars as [re, im].
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .asymptotics import (
    order_type_estimate,
    rate_limsup,
    telescope_extend,
    winiarski_check,
)
from .curvature import (
    ScalarField,
    compensator_check,
    metric_form,
    ricci_potential,
    volume_growth_fit,
    volume_sublevel,
)
from .extremal import christoffel_estimate, reference_extremal
from .manifold_models import (
    ConfigurationError,
    Exp,
    ExpOfMonomial,
    FourierFinite,
    Polynomial,
    PolynomialFn,
    RationalPole,
    TorusGeometricKernel,
    classic,
    default_mesh_size,
    graph_complement,
    mapped_polynomial,
    sample_compact,
    torus,
)
from .minimax import approx_sweep, records_to_csv

OUT_ENV = "PSILAB_OUT"
_VERDICT_KEYS = ("L_true", "order_type", "compensator")
_VERDICT_OWNER = {"bws": "L_true", "winiarski": "order_type", "curvature": "compensator"}
_SUBCOMMANDS = ("approx", "bws", "winiarski", "extremal", "curvature", "volume", "extend")


def _fail(msg: str) -> ConfigurationError:
    return ConfigurationError(msg)


def _require(config: dict, field: str):
    if field not in config:
        raise _fail(f"config field {field!r} is required")
    return config[field]


def _parse_complex(value, field: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) for v in value
    ):
        return complex(value[0], value[1])
    raise _fail(f"field {field!r}: expected a number or [re, im], got {value!r}")


def _build_polynomial(block, field: str) -> Polynomial:
    if not isinstance(block, dict):
        raise _fail(f"field {field!r}: expected a polynomial block")
    nvars = block.get("nvars")
    if not isinstance(nvars, int) or nvars < 1:
        raise _fail(f"field {field!r}: 'nvars' must be a positive integer")
    coeffs = {}
    for key, val in _require(block, "coeffs").items():
        try:
            expo = tuple(int(p) for p in str(key).split(","))
        except ValueError:
            raise _fail(f"field {field!r}: bad exponent key {key!r}") from None
        if len(expo) != nvars or any(e < 0 for e in expo):
            raise _fail(f"field {field!r}: exponent key {key!r} does not match nvars={nvars}")
        coeffs[expo] = _parse_complex(val, f"{field}.coeffs[{key}]")
    return Polynomial(coeffs, nvars)


def _build_model(config: dict):
    block = _require(config, "model")
    kind = _require(block, "kind")
    if kind == "classic":
        return classic(int(_require(block, "dimension")))
    if kind == "torus":
        return torus(int(_require(block, "dimension")))
    if kind == "mapped":
        maps = [
            _build_polynomial(b, f"model.maps[{i}]")
            for i, b in enumerate(_require(block, "maps"))
        ]
        return mapped_polynomial(maps, block.get("dimension"))
    if kind == "graph":
        poly = _build_polynomial(_require(block, "graph_poly"), "model.graph_poly")
        return graph_complement(poly, block.get("dimension"))
    raise _fail(f"unknown model kind {kind!r}")


def _build_function(config: dict):
    block = _require(config, "function")
    kind = _require(block, "kind")
    if kind == "rational_pole":
        return RationalPole(_parse_complex(_require(block, "a"), "function.a"))
    if kind == "exp":
        return Exp(_parse_complex(_require(block, "c"), "function.c"))
    if kind == "torus_kernel":
        return TorusGeometricKernel(float(_require(block, "h")))
    if kind == "fourier":
        coeffs = {}
        for key, val in _require(block, "coeffs").items():
            idx = tuple(int(p) for p in str(key).split(","))
            coeffs[idx if len(idx) > 1 else idx[0]] = _parse_complex(
                val, f"function.coeffs[{key}]"
            )
        return FourierFinite(coeffs)
    if kind == "polynomial":
        return PolynomialFn(_build_polynomial(block, "function"))
    if kind == "exp_monomial":
        return ExpOfMonomial(
            int(_require(block, "power")),
            _parse_complex(block.get("scale", 1.0), "function.scale"),
        )
    raise _fail(f"unknown function kind {kind!r}")


def _build_t_list(config: dict) -> list:
    if "t_list" in config:
        ts = [float(t) for t in config["t_list"]]
    elif all(k in config for k in ("t_min", "t_max", "t_step")):
        t0, t1 = float(config["t_min"]), float(config["t_max"])
        step = float(config["t_step"])
        if step <= 0:
            raise _fail("t_step must be positive")
        ts = []
        t = t0
        while t <= t1 + 1e-9:
            ts.append(round(t, 12))
            t += step
    else:
        raise _fail("config needs 't_list' or 't_min'/'t_max'/'t_step'")
    if len(ts) < 1 or any(b <= a for a, b in zip(ts, ts[1:])):
        raise _fail("degree list must be strictly increasing and nonempty")
    return ts


def _parse_point(entry, n: int, field: str) -> tuple:
    if n == 1 and (isinstance(entry, (int, float)) or (
        isinstance(entry, list) and len(entry) == 2
        and all(isinstance(v, (int, float)) for v in entry)
    )):
        return (_parse_complex(entry, field),)
    if isinstance(entry, list) and len(entry) == n:
        return tuple(_parse_complex(v, field) for v in entry)
    raise _fail(f"field {field!r}: expected a point with {n} coordinates")


def _build_theta(block, model):
    kind = _require(block, "kind")
    if kind == "zero":
        return ScalarField(lambda pts: np.zeros(pts.shape[0]), "zero")
    if kind == "ricci_potential":
        return ricci_potential(model)
    if kind == "log_one_plus_F_power":
        power = float(_require(block, "power"))
        if model.graph_poly is None:
            raise _fail("theta kind 'log_one_plus_F_power' needs a graph model")
        f = model.graph_poly

        def fn(pts: np.ndarray) -> np.ndarray:
            fv = np.abs(pts[:, -1] - np.asarray(f(pts[:, :-1])).reshape(pts.shape[0]))
            with np.errstate(divide="ignore", over="ignore"):
                return np.log1p(fv**power)

        return ScalarField(fn, f"log(1 + |F|^{power:g})")
    raise _fail(f"unknown theta kind {kind!r}")


def _check_verdict_blocks(sub: str, config: dict) -> None:
    present = [k for k in _VERDICT_KEYS if k in config]
    owner = _VERDICT_OWNER.get(sub)
    if owner is None:
        if present:
            raise _fail(
                f"subcommand {sub!r} takes no verdict block, found {present}"
            )
    elif present != [owner]:
        raise _fail(
            f"subcommand {sub!r} requires exactly the verdict block {owner!r}, "
            f"found {present or 'none'}"
        )


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    return x


def _record_rows(records) -> list:
    return [
        {
            "t": float(r.t),
            "dim": int(r.dim),
            "d_value": float(r.d_value),
            "lower_bound": float(r.lower_bound),
            "iterations": int(r.iterations),
            "converged": bool(r.converged),
            "floor_flag": bool(r.floor_flag),
        }
        for r in records
    ]


def _write_report(out_dir: str, prefix: str, sub: str, payload: dict) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{prefix}_{sub}.json")
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _write_csv(out_dir: str, prefix: str, sub: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{prefix}_{sub}.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(repr(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _fmt_point(pt) -> str:
    return ";".join(repr(complex(c)) for c in pt)


def _exit_code(verdicts) -> int:
    names = [v["verdict"] for v in verdicts]
    if any(v == "FAIL" for v in names):
        return 1
    if any(v == "INCONCLUSIVE" for v in names):
        return 2
    return 0


def _run_sweep(config: dict):
    model = _build_model(config)
    f = _build_function(config)
    ts = _build_t_list(config)
    mesh = int(config.get("mesh_size", default_mesh_size(max(ts))))
    K = sample_compact(_require(config, "K"), model, mesh)
    records = approx_sweep(model, K, f, ts)
    if not any(r.converged and math.isfinite(r.d_value) for r in records):
        raise _fail("all sweep records failed; nothing to report")
    return model, f, K, records


def _cmd_approx(config, args, out_dir, prefix):
    _, _, _, records = _run_sweep(config)
    _write_csv(out_dir, prefix, "approx", records_to_csv(records))
    payload = {
        "subcommand": "approx",
        "version": __version__,
        "config": config,
        "records": _record_rows(records),
        "verdicts": [],
    }
    path = _write_report(out_dir, prefix, "approx", payload)
    print(f"wrote {path}")
    return 0


def _cmd_bws(config, args, out_dir, prefix):
    _, _, _, records = _run_sweep(config)
    tol = float(config.get("tolerance", 0.03))
    report = rate_limsup(records, L_true=float(config["L_true"]), tolerance=tol)
    _write_csv(out_dir, prefix, "bws", records_to_csv(records))
    verdicts = [{"name": "rate_limsup", "verdict": report.verdict, "detail": report.detail}]
    payload = {
        "subcommand": "bws",
        "version": __version__,
        "config": config,
        "records": _record_rows(records),
        "rate": {
            "L_hat": report.L_hat,
            "slope_fit": report.slope_fit,
            "fit_window": list(report.fit_window),
            "residual": report.residual,
            "n_used": report.n_used,
        },
        "verdicts": verdicts,
    }
    path = _write_report(out_dir, prefix, "bws", payload)
    print(f"rate_limsup: {report.verdict} (L_hat={report.L_hat:.6g})")
    print(f"wrote {path}")
    return _exit_code(verdicts)


def _cmd_winiarski(config, args, out_dir, prefix):
    model, f, _, records = _run_sweep(config)
    tol = float(config.get("tolerance", 0.03))
    block = _require(config, "order_type")
    estimate = None
    if "r_grid" in block:
        estimate = order_type_estimate(f, model, None, [float(r) for r in block["r_grid"]])
    if "rho" in block and "sigma" in block:
        rho, sigma = float(block["rho"]), float(block["sigma"])
    elif estimate is not None:
        rho, sigma = estimate.rho_hat, estimate.sigma_hat
    else:
        raise _fail("order_type block needs 'rho' and 'sigma', or an 'r_grid' to estimate them")
    report = winiarski_check(records, rho, sigma, tolerance=tol)
    _write_csv(out_dir, prefix, "winiarski", records_to_csv(records))
    verdicts = [{"name": "winiarski", "verdict": report.verdict, "detail": report.detail}]
    payload = {
        "subcommand": "winiarski",
        "version": __version__,
        "config": config,
        "records": _record_rows(records),
        "order_type": {
            "rho": rho,
            "sigma": sigma,
            "rho_hat": estimate.rho_hat if estimate else None,
            "sigma_hat": estimate.sigma_hat if estimate else None,
        },
        "plateau": {
            "plateau": report.plateau,
            "bound": report.bound,
            "residual": report.residual,
            "n_used": report.n_used,
        },
        "verdicts": verdicts,
    }
    path = _write_report(out_dir, prefix, "winiarski", payload)
    print(f"winiarski: {report.verdict} (plateau={report.plateau}, bound={report.bound})")
    print(f"wrote {path}")
    return _exit_code(verdicts)


def _cmd_extremal(config, args, out_dir, prefix):
    model = _build_model(config)
    t = float(_require(config, "t"))
    mesh = int(config.get("mesh_size", default_mesh_size(t)))
    k_spec = _require(config, "K")
    K = sample_compact(k_spec, model, mesh)
    points = [
        _parse_point(p, model.dimension, f"points[{i}]")
        for i, p in enumerate(_require(config, "points"))
    ]
    rows = []
    table = []
    for z in points:
        est = christoffel_estimate(model, K, z, t)
        ref = reference_extremal(model, k_spec, z)
        rows.append(
            {
                "z": [_jsonable(c) for c in z],
                "log_phi_t": est.log_phi_t,
                "reference": ref,
                "bracket": est.bracket,
                "effective_dim": est.effective_dim,
                "rank_deficient": est.rank_deficient,
                "converged": est.converged,
                "iterations": est.iterations,
            }
        )
        table.append(
            (
                ";".join(repr(float(c.real)) for c in z),
                ";".join(repr(float(c.imag)) for c in z),
                float(t),
                float(est.log_phi_t),
                float("nan") if ref is None else float(ref),
                float(est.bracket),
                int(est.effective_dim),
                bool(est.rank_deficient),
            )
        )
    _write_csv(
        out_dir,
        prefix,
        "extremal",
        _csv_text(
            (
                "re_z",
                "im_z",
                "t",
                "log_phi_t",
                "reference",
                "bracket",
                "effective_dim",
                "rank_deficient",
            ),
            table,
        ),
    )
    payload = {
        "subcommand": "extremal",
        "version": __version__,
        "config": config,
        "t": t,
        "points": rows,
        "verdicts": [],
    }
    path = _write_report(out_dir, prefix, "extremal", payload)
    print(f"wrote {path}")
    return 0


def _cmd_curvature(config, args, out_dir, prefix):
    model = _build_model(config)
    block = _require(config, "compensator")
    theta = _build_theta(_require(block, "theta"), model)
    points = [
        _parse_point(p, model.dimension, f"compensator.points[{i}]")
        for i, p in enumerate(_require(block, "points"))
    ]
    tol = float(config.get("tolerance", 1e-6))
    kwargs = {}
    if "h_step" in block:
        kwargs["h_step"] = float(block["h_step"])
    if "scheme" in block:
        kwargs["scheme"] = str(block["scheme"])
    audit = compensator_check(model, theta, points, tol=tol, **kwargs)
    metric_rows = []
    for pt in audit.points:
        try:
            sample = metric_form(model, pt)
            metric_rows.append(
                {
                    "z": [_jsonable(c) for c in pt.coords],
                    "eigenvalues": list(sample.eigenvalues),
                    "positive_definite": sample.positive_definite,
                }
            )
        except Exception as exc:
            metric_rows.append({"z": [_jsonable(c) for c in pt.coords], "error": str(exc)})
    verdicts = [
        {
            "name": "compensator",
            "verdict": audit.verdict,
            "detail": f"min_eig_sum={audit.min_eig_sum}",
        }
    ]
    payload = {
        "subcommand": "curvature",
        "version": __version__,
        "config": config,
        "theta": theta.description if hasattr(theta, "description") else str(theta),
        "min_eig_sum": audit.min_eig_sum,
        "growth_fit": {
            "A": audit.growth_fit[0],
            "B": audit.growth_fit[1],
            "residual": audit.growth_residual,
        },
        "eig_table": [
            {"z": [_jsonable(c) for c in pt.coords], "eigenvalues": list(eigs)}
            for pt, eigs in audit.eig_table
        ],
        "metric_samples": metric_rows,
        "skipped": [
            {"z": [_jsonable(c) for c in pt.coords], "reason": reason}
            for pt, reason in audit.skipped
        ],
        "verdicts": verdicts,
    }
    path = _write_report(out_dir, prefix, "curvature", payload)
    print(f"compensator: {audit.verdict} (min_eig_sum={audit.min_eig_sum})")
    print(f"wrote {path}")
    return _exit_code(verdicts)


def _cmd_volume(config, args, out_dir, prefix):
    model = _build_model(config)
    seed = config.get("seed")
    if seed is None:
        raise _fail("volume requires a seed (Monte Carlo path)")
    mc = int(config.get("mc_samples", 200_000))
    jobs = max(1, int(args.jobs))
    payload = {
        "subcommand": "volume",
        "version": __version__,
        "config": config,
        "verdicts": [],
    }
    rows = []
    if "L_grid" in config:
        r = float(_require(config, "r"))
        fit = volume_growth_fit(
            model, r, [float(v) for v in config["L_grid"]], mc_samples=mc, seed=seed
        )
        payload["growth_fit"] = {
            "A": fit.A,
            "B": fit.B,
            "r": fit.r,
            "max_residual": fit.max_residual,
            "satisfiable": fit.satisfiable,
        }
        payload["table"] = [
            {"L": L, "volume": v, "std_error": se} for (L, v, se) in fit.table
        ]
        rows = [(float(L), float(v), float(se)) for (L, v, se) in fit.table]
    else:
        L = float(_require(config, "L"))
        est = volume_sublevel(model, L, mc_samples=mc, seed=seed, jobs=jobs)
        payload["volume"] = {
            "L": L,
            "value": float(est),
            "std_error": est.std_error,
            "rel_std_error": est.rel_std_error,
            "n_samples": est.n_samples,
            "n_inside": est.n_inside,
            "box_volume": est.box_volume,
            "box_descriptor": est.box_descriptor,
        }
        rows = [(L, float(est), est.std_error)]
    _write_csv(
        out_dir, prefix, "volume", _csv_text(("L", "volume", "std_error"), rows)
    )
    path = _write_report(out_dir, prefix, "volume", payload)
    print(f"wrote {path}")
    return 0


def _cmd_extend(config, args, out_dir, prefix):
    model, _, _, records = _run_sweep(config)
    approximants = [r.approximant for r in records if r.converged and r.approximant is not None]
    if not approximants:
        raise _fail("no converged approximants available for telescoping")
    points = [
        _parse_point(p, model.dimension, f"points[{i}]")
        for i, p in enumerate(_require(config, "points"))
    ]
    rows = []
    table = []
    for z in points:
        res = telescope_extend(approximants, z)
        rows.append(
            {
                "z": [_jsonable(c) for c in z],
                "value": _jsonable(res.value),
                "last_term": res.last_term,
                "n_terms": res.n_terms,
                "out_of_domain": res.out_of_domain,
            }
        )
        table.append(
            (
                _fmt_point(z),
                float(res.value.real),
                float(res.value.imag),
                float(res.last_term),
                int(res.n_terms),
                bool(res.out_of_domain),
            )
        )
    _write_csv(
        out_dir,
        prefix,
        "extend",
        _csv_text(
            ("z", "value_re", "value_im", "last_term", "n_terms", "out_of_domain"), table
        ),
    )
    payload = {
        "subcommand": "extend",
        "version": __version__,
        "config": config,
        "records": _record_rows(records),
        "points": rows,
        "verdicts": [],
    }
    path = _write_report(out_dir, prefix, "extend", payload)
    print(f"wrote {path}")
    return 0


_HANDLERS = {
    "approx": _cmd_approx,
    "bws": _cmd_bws,
    "winiarski": _cmd_winiarski,
    "extremal": _cmd_extremal,
    "curvature": _cmd_curvature,
    "volume": _cmd_volume,
    "extend": _cmd_extend,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psilab",
        description="Weighted polynomial approximation experiments",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="path to JSON config")
        p.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or '.')")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--tol", type=float, default=None, help="override config tolerance")
        p.add_argument("--jobs", type=int, default=1, help="worker threads (volume only)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(
            f"error: config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 1
    if not isinstance(config, dict):
        print("error: config root must be a JSON object", file=sys.stderr)
        return 1
    if args.seed is not None:
        config["seed"] = int(args.seed)
    if args.tol is not None:
        config["tolerance"] = float(args.tol)
    out_dir = args.out or os.environ.get(OUT_ENV) or "."
    prefix = str(config.get("output_prefix", "report"))
    try:
        _check_verdict_blocks(args.subcommand, config)
        return _HANDLERS[args.subcommand](config, args, out_dir, prefix)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
