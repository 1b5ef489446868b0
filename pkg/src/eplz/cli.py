"""Command-line front end: plot-ready CSV/JSON datasets for every result.

Subcommands
-----------
spectrum     eigenvalues over a time grid
overlaps     pairwise eigenvector overlaps over a time grid
transitions  analytic and/or numeric transition probabilities over drive rates
lift-check   property suite for the SL(2) -> SL(N) lift
adiabatic    adiabatic-limit populations and the projection cross-check

Every data file is paired with a ``.meta.json`` sidecar recording the full
parameters and conventions; reruns with identical flags are byte-identical.
Exit codes: 0 success, 1 usage, 2 numerical failure, 3 property-suite failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .analytic import (
    adiabatic_P,
    adiabatic_P_exact,
    adiabatic_projection,
)
from .errors import EplzError, InvalidDimensionError, NearEPError
from .model import (
    ModelParams,
    ep_data,
    ep_times,
    eigensystem_at,
    overlap_matrix,
    spectrum_sweep,
)
from .propagate import IntegratorConfig, alpha_sweep
from .repr_lift import lift
from .su2_ops import SpinSpace, coherent_state

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_PROPERTY = 3

OUTDIR_ENV = "EPLZ_OUT"

CONVENTIONS = {
    "lambda_branch": (
        "nonnegative real root for |t| >= gamma/alpha; "
        "+i*sqrt(gamma^2 - (alpha t)^2) between the exceptional points"
    ),
    "basis_ordering": "j = 0 labels the highest Jz (resp. Jy) eigenvalue J; j runs to n = N-1",
    "eigenvector_normalization": "<chi_j|phi_k> = delta_jk with equal Euclidean norms per pair",
    "transition_indexing": "entries[j][k]: initial state k at t -> -inf, final state j at t -> +inf",
}


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept grid specs with a negative start ("-3:3:601") as option values
        self._negative_number_matcher = re.compile(r"^-\d+(\.\d+)?([:eE].*)?$")

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(value) -> str:
    """17 significant digits: round-trip exact for doubles."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    return f"{value:.17g}"


def parse_grid(spec: str) -> np.ndarray:
    """Grid spec ``start:stop:count``, optionally ``log:`` prefixed, or a scalar."""
    body = spec
    logspaced = False
    if spec.startswith("log:"):
        logspaced = True
        body = spec[4:]
    parts = body.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ValueError(f"grid spec must be [log:]start:stop:count, got {spec!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"grid count must be >= 1, got {count}")
    if count == 1:
        return np.array([start])
    if logspaced:
        if start <= 0 or stop <= 0:
            raise ValueError("log grids need positive endpoints")
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _outdir(args) -> str:
    out = args.out or os.environ.get(OUTDIR_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _json_default(obj):
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if obj == math.inf:
        return "inf"
    raise TypeError(f"not JSON-serializable: {obj!r}")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _write_table(args, name: str, header: list[str], rows, meta: dict) -> list[str]:
    out = _outdir(args)
    meta = dict(meta, tool_version=__version__, conventions=CONVENTIONS)
    paths = []
    if args.format == "csv":
        data_path = os.path.join(out, f"{name}.csv")
        _write_csv(data_path, header, rows)
    else:
        data_path = os.path.join(out, f"{name}.json")
        _write_json(data_path, {"columns": header, "rows": [list(r) for r in rows]})
    paths.append(data_path)
    meta_path = os.path.join(out, f"{name}.meta.json")
    _write_json(meta_path, meta)
    paths.append(meta_path)
    return paths


def _coupling_from(args) -> float:
    if args.model == "pt":
        if args.v is not None:
            raise ValueError("the PT model takes --gamma, not --v")
        return args.gamma if args.gamma is not None else 1.0
    if args.gamma is not None:
        raise ValueError("the Hermitian model takes --v, not --gamma")
    return args.v if args.v is not None else 1.0


def _params_from(args) -> ModelParams:
    return ModelParams(
        kind=args.model,
        alpha=float(args.alpha),
        coupling=_coupling_from(args),
        space=SpinSpace(args.n),
    )


def _usage_error(message: str) -> int:
    print(f"eplz: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _param_meta(params: ModelParams) -> dict:
    return {
        "model": params.kind.value,
        "n_levels": params.space.n_levels,
        "alpha": params.alpha,
        ("gamma" if params.is_pt else "v"): params.coupling,
    }


def cmd_spectrum(args) -> int:
    params = _params_from(args)
    grid = parse_grid(args.t)
    table = spectrum_sweep(params, grid)
    n = params.space.n_levels
    header = ["t"]
    for j in range(n):
        header += [f"re_E_{j}", f"im_E_{j}"]
    header.append("at_ep")
    rows = []
    for i, t in enumerate(table.t):
        row = [t]
        for j in range(n):
            row += [table.energies[i, j].real, table.energies[i, j].imag]
        row.append(bool(table.at_ep[i]))
        rows.append(row)
    meta = {"command": "spectrum", "params": _param_meta(params), "t_grid": args.t}
    paths = _write_table(args, "spectrum", header, rows, meta)
    print("\n".join(paths))
    return EXIT_OK


def cmd_overlaps(args) -> int:
    params = _params_from(args)
    grid = parse_grid(args.t)
    n = params.space.n_levels
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    header = ["t"] + [f"ov_{j}_{k}" for j, k in pairs] + ["at_ep"]
    rows = []
    for t in grid:
        try:
            g = overlap_matrix(params, float(t))
            rows.append([t] + [g[j, k] for j, k in pairs] + [False])
        except NearEPError:
            rows.append([t] + [math.nan] * len(pairs) + [True])
    meta = {"command": "overlaps", "params": _param_meta(params), "t_grid": args.t}
    paths = _write_table(args, "overlaps", header, rows, meta)
    print("\n".join(paths))
    return EXIT_OK


def cmd_transitions(args) -> int:
    space = SpinSpace(args.n)
    coupling = _coupling_from(args)
    alphas = parse_grid(args.alpha_sweep or args.alpha)
    template = ModelParams(kind=args.model, alpha=float(alphas[0]), coupling=coupling, space=space)
    cfg = IntegratorConfig(rel_tol=args.tol) if args.tol else IntegratorConfig()
    include_numeric = args.mode in ("numeric", "both")
    include_analytic = args.mode in ("analytic", "both")
    points = alpha_sweep(
        template,
        alphas,
        cfg,
        include_analytic=include_analytic,
        include_numeric=include_numeric,
    )

    n = space.n_levels
    header = ["alpha", "source"] + [f"P_{j}0" for j in range(n)]
    if args.mode == "both":
        header.append("max_abs_dev")
    header.append("status")
    rows = []
    matrices = []
    for pt in points:
        record = {"alpha": pt.alpha, "status": pt.status, "info": pt.info}
        if include_analytic:
            row = [pt.alpha, "analytic"] + list(pt.analytic[:, 0])
            if args.mode == "both":
                row.append("" if pt.max_abs_dev is None else pt.max_abs_dev)
            row.append("ok")
            rows.append(row)
            record["analytic"] = pt.analytic.tolist()
        if include_numeric:
            col = pt.numeric[:, 0] if pt.numeric is not None else [math.nan] * n
            row = [pt.alpha, "numeric"] + list(col)
            if args.mode == "both":
                row.append("" if pt.max_abs_dev is None else pt.max_abs_dev)
            row.append(pt.status)
            rows.append(row)
            record["numeric"] = None if pt.numeric is None else pt.numeric.tolist()
            record["max_abs_dev"] = pt.max_abs_dev
        matrices.append(record)
    meta = {
        "command": "transitions",
        "params": {
            "model": args.model,
            "n_levels": n,
            ("gamma" if args.model == "pt" else "v"): coupling,
        },
        "alpha_grid": args.alpha_sweep or args.alpha,
        "mode": args.mode,
        "integrator": (
            {
                k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
                for k, v in asdict(cfg).items()
            }
            if include_numeric
            else None
        ),
        "results": matrices,
    }
    paths = _write_table(args, "transitions", header, rows, meta)
    print("\n".join(paths))
    return EXIT_OK


def _random_sl2(rng) -> np.ndarray:
    """Seeded random SL(2) element, conditioned away from near-singular draws.

    The norm cap keeps lifted entries at N = 8 of order 10^2, so determinant
    and homomorphism roundoff stays well inside the 1e-9 gate.
    """
    while True:
        d = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        det = d[0, 0] * d[1, 1] - d[0, 1] * d[1, 0]
        if abs(det) < 0.3:
            continue
        d = d / np.sqrt(det)
        if np.linalg.norm(d) < 2.5:
            return d


def _random_su2(rng) -> np.ndarray:
    d = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(d)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    det = q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0]
    return q / np.sqrt(det)


def cmd_lift_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    tol = 1e-9
    failed = False
    report = []
    for n_levels in range(args.n_min, args.n_max + 1):
        space = SpinSpace(n_levels)
        errs = {"homomorphism": 0.0, "equivariance": 0.0, "det": 0.0, "unitarity": 0.0}
        for _ in range(args.samples):
            d1 = _random_sl2(rng)
            d2 = _random_sl2(rng)
            l1 = lift(d1, space)
            errs["homomorphism"] = max(
                errs["homomorphism"], np.abs(lift(d1 @ d2, space) - l1 @ lift(d2, space)).max()
            )
            psi = rng.normal(size=2) + 1j * rng.normal(size=2)
            psi /= np.linalg.norm(psi)
            mapped = d1 @ psi
            errs["equivariance"] = max(
                errs["equivariance"],
                np.abs(
                    l1 @ coherent_state(space, psi[0], psi[1])
                    - coherent_state(space, mapped[0], mapped[1])
                ).max(),
            )
            errs["det"] = max(errs["det"], abs(np.linalg.det(l1) - 1.0))
            u = _random_su2(rng)
            lu = lift(u, space)
            errs["unitarity"] = max(
                errs["unitarity"],
                np.abs(lu.conj().T @ lu - np.eye(n_levels)).max(),
            )
        errs = {k: float(v) for k, v in errs.items()}
        ok = all(v < tol for v in errs.values())
        failed = failed or not ok
        report.append({"n_levels": n_levels, "max_errors": errs, "pass": ok})
        detail = " ".join(f"{k}={v:.3e}" for k, v in errs.items())
        print(f"{'PASS' if ok else 'FAIL'} N={n_levels} samples={args.samples} {detail}")
    if args.out:
        out = _outdir(args)
        _write_json(
            os.path.join(out, "lift_check.json"),
            {
                "command": "lift-check",
                "seed": args.seed,
                "samples": args.samples,
                "tolerance": tol,
                "report": report,
                "tool_version": __version__,
            },
        )
    return EXIT_PROPERTY if failed else EXIT_OK


def cmd_adiabatic(args) -> int:
    space = SpinSpace(args.n)
    params = ModelParams(kind="pt", alpha=args.alpha, coupling=args.gamma, space=space)
    t_ep = ep_times(params)[1]
    t = args.t if args.t is not None else 2.0 * t_ep
    if t <= t_ep:
        return _usage_error(f"--t must exceed the second exceptional point t={t_ep:g}")
    proj = adiabatic_projection(params, t)
    limit = adiabatic_P(space)
    es = eigensystem_at(params, t)
    phi_ep = ep_data(params).ep_vector_plus
    cross = np.abs(es.left_vectors.conj().T @ phi_ep) ** 2
    payload = {
        "command": "adiabatic",
        "params": _param_meta(params),
        "t": t,
        "adiabatic_P": limit.tolist(),
        "adiabatic_P_exact": [str(f) for f in adiabatic_P_exact(space)],
        "raw_projection": proj.raw.tolist(),
        "normalized_projection": proj.normalized.tolist(),
        "crosscheck_projection": cross.tolist(),
        "x_abs": proj.x_abs,
        "normalized_vs_limit_dev": float(np.abs(proj.normalized - limit).max()),
        "crosscheck_vs_raw_dev": float(np.abs(cross - proj.raw).max()),
        "tool_version": __version__,
        "conventions": CONVENTIONS,
    }
    out = _outdir(args)
    path = os.path.join(out, "adiabatic.json")
    _write_json(path, payload)
    meta = {
        "command": "adiabatic",
        "params": _param_meta(params),
        "t": t,
        "tool_version": __version__,
        "conventions": CONVENTIONS,
    }
    meta_path = os.path.join(out, "adiabatic.meta.json")
    _write_json(meta_path, meta)
    print(path)
    print(meta_path)
    return EXIT_OK


def _add_common(p, need_t=False):
    p.add_argument("--model", choices=["hermitian", "pt"], default="pt")
    p.add_argument("--n", type=int, default=2, help="number of levels N >= 2")
    p.add_argument("--alpha", default="1", help="drive rate (scalar, or grid for transitions)")
    p.add_argument("--gamma", type=float, default=None, help="PT coupling")
    p.add_argument("--v", type=float, default=None, help="Hermitian coupling")
    p.add_argument("--out", default=None, help=f"output directory (default ${OUTDIR_ENV} or .)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    if need_t:
        p.add_argument("--t", required=True, help="time grid start:stop:count")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eplz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"eplz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="eigenvalues over a time grid")
    _add_common(p, need_t=True)
    p.set_defaults(func=cmd_spectrum)
    # spectrum/overlaps take a scalar alpha
    p = sub.add_parser("overlaps", help="eigenvector overlaps over a time grid")
    _add_common(p, need_t=True)
    p.set_defaults(func=cmd_overlaps)

    p = sub.add_parser("transitions", help="transition probabilities over drive rates")
    _add_common(p)
    p.add_argument("--alpha-sweep", default=None, help="explicit alpha grid (overrides --alpha)")
    p.add_argument("--tol", type=float, default=None, help="integrator relative tolerance")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--analytic", dest="mode", action="store_const", const="analytic")
    mode.add_argument("--numeric", dest="mode", action="store_const", const="numeric")
    mode.add_argument("--both", dest="mode", action="store_const", const="both")
    p.set_defaults(func=cmd_transitions, mode="analytic")

    p = sub.add_parser("lift-check", help="representation-lift property suite")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=20203)
    p.add_argument("--out", default=None, help="also write lift_check.json here")
    p.set_defaults(func=cmd_lift_check)

    p = sub.add_parser("adiabatic", help="adiabatic-limit populations and cross-check")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--t", type=float, default=None, help="evaluation time > gamma/alpha")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_adiabatic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, InvalidDimensionError) as exc:
        return _usage_error(str(exc))
    except EplzError as exc:
        print(f"eplz: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
