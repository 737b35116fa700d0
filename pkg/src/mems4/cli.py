"""Command-line driver: bounds tables, certificates, branch sweeps,
pull-in estimation, profiles, and the sub-solution search.

Exit codes: 0 success/verified, 1 falsified or diverged, 2 inconclusive
or flagged, 3+ usage and I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from mems4 import certify
from mems4.branch import (
    minimal_solution,
    BranchPoint,
    continue_branch,
    pull_in_voltage,
    quadratic_lower_bound,
    regularity_verdict,
)
from mems4.closed_forms import (
    BoundaryPair,
    format_rational,
    hardy_rellich,
    is_admissible,
    rational_to_decimal,
    singular_voltage,
)
from mems4.radial_operator import build_grid
from mems4.store import (
    default_out_root,
    rational_json,
    run_directory,
    write_csv,
    write_json,
    write_jsonl,
)

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

CLAIM_SELECTORS = ("m3-gap", "m2-subsolution", "m3-stability", "thresholds")
FAMILIES = ("perturbed-touchdown", "touchdown-m")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 3, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    """Validated run configuration; JSON round-trip is lossless."""

    dimensions: list[int] = field(default_factory=lambda: [3])
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    mesh: int = 512
    gamma: float = 1.5
    tol: float = 1e-10
    rel_width: float = 1e-6
    out_format: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        self.alpha = Fraction(self.alpha)
        self.beta = Fraction(self.beta)
        if self.mesh < 16:
            raise ValueError("mesh must have at least 16 nodes")
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")
        if not is_admissible(self.boundary):
            raise ValueError("boundary pair is not admissible")
        if self.out_format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        for n in self.dimensions:
            if n < 1:
                raise ValueError("dimensions must be positive")

    @property
    def boundary(self) -> BoundaryPair:
        return BoundaryPair(self.alpha, self.beta)

    def to_json_dict(self) -> dict:
        return {
            "dimensions": list(self.dimensions),
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "mesh": self.mesh,
            "gamma": self.gamma,
            "tol": self.tol,
            "rel_width": self.rel_width,
            "format": self.out_format,
            "jobs": self.jobs,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "RunConfig":
        return RunConfig(
            dimensions=[int(x) for x in d.get("dimensions", [3])],
            alpha=Fraction(d.get("alpha", "0")),
            beta=Fraction(d.get("beta", "0")),
            mesh=int(d.get("mesh", 512)),
            gamma=float(d.get("gamma", 1.5)),
            tol=float(d.get("tol", 1e-10)),
            rel_width=float(d.get("rel_width", 1e-6)),
            out_format=str(d.get("format", "csv")),
            jobs=int(d.get("jobs", 1)),
        )


def parse_range(text: str) -> tuple[int, int]:
    """Dimension ranges like "17..30" or a single "9"."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    v = int(text)
    return v, v


def parse_lambda_spec(text: str) -> list[float] | None:
    """Voltage grids "start:stop:count"; "auto" returns None."""
    if text == "auto":
        return None
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("voltage spec must be start:stop:count or auto")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("count must be >= 1")
    if count == 1:
        return [start]
    return list(np.linspace(start, stop, count))


def parse_fraction_grid(text: str) -> list[Fraction]:
    """Exact rational grids "1:3:9" (start:stop:count, equal steps)."""
    parts = text.split(":")
    if len(parts) == 1:
        return [Fraction(parts[0])]
    if len(parts) != 3:
        raise ValueError("grid spec must be start:stop:count")
    start, stop, count = Fraction(parts[0]), Fraction(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("count must be >= 1")
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + k * step for k in range(count)]


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file; flags override")
    p.add_argument("--out", type=Path, help="output root (default $MEMS4_OUT or ./mems4-out)")
    p.add_argument("--format", choices=("csv", "json"), help="table format")
    p.add_argument("--jobs", type=int, help="worker pool size for per-dimension fanout")
    p.add_argument("--mesh", type=int, help="interior node count")
    p.add_argument("--gamma", type=float, help="mesh grading exponent")
    p.add_argument("--tol", type=float, help="solver residual tolerance")
    p.add_argument("--rel-width", type=float, help="pull-in bracket relative width")
    p.add_argument("--alpha", help="boundary value at r=1 (exact rational)")
    p.add_argument("--beta", help="boundary slope at r=1 (exact rational)")


def _load_config(args) -> RunConfig:
    base = {}
    if args.config:
        base = json.loads(Path(args.config).read_text())
    cfg = RunConfig.from_json_dict(base)
    if getattr(args, "dim", None) is not None:
        cfg.dimensions = [args.dim]
    if getattr(args, "mesh", None) is not None:
        cfg.mesh = args.mesh
    if getattr(args, "gamma", None) is not None:
        cfg.gamma = args.gamma
    if getattr(args, "tol", None) is not None:
        cfg.tol = args.tol
    if getattr(args, "rel_width", None) is not None:
        cfg.rel_width = args.rel_width
    if getattr(args, "format", None) is not None:
        cfg.out_format = args.format
    if getattr(args, "jobs", None) is not None:
        cfg.jobs = args.jobs
    if getattr(args, "alpha", None) is not None:
        cfg.alpha = Fraction(args.alpha)
    if getattr(args, "beta", None) is not None:
        cfg.beta = Fraction(args.beta)
    cfg.__post_init__()  # re-validate after overrides
    return cfg


def _out_root(args) -> Path:
    return Path(args.out) if args.out else default_out_root()


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def bounds_rows(n_min: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        l1 = quadratic_lower_bound(n)
        lb = singular_voltage(n)
        h = hardy_rellich(n)
        rows.append(
            {
                "n": n,
                "lower_quadratic": l1,
                "singular_voltage": lb,
                "hardy": h,
                "half_hardy": h / 2,
                "voltage_27": 27 * lb,
                "double_voltage_le_hardy": 2 * lb <= h,
                "voltage27_le_half_hardy": 27 * lb <= h / 2,
            }
        )
    return rows


def cmd_bounds(args) -> int:
    cfg = _load_config(args)
    n_min, n_max = parse_range(args.n)
    if not 1 <= n_min <= n_max <= 64:
        print("bounds: need 1 <= nmin <= nmax <= 64", file=sys.stderr)
        return EXIT_USAGE
    rows = bounds_rows(n_min, n_max)
    run = run_directory(
        _out_root(args), "bounds", {"n": [n_min, n_max], "config": cfg.to_json_dict()}
    )
    write_json(run / "config.json", {"command": "bounds", "config": cfg.to_json_dict()})
    try:
        if cfg.out_format == "json":
            payload = [
                {
                    "n": r["n"],
                    "lower_quadratic": rational_json(r["lower_quadratic"]),
                    "singular_voltage": rational_json(r["singular_voltage"]),
                    "hardy": rational_json(r["hardy"]),
                    "half_hardy": rational_json(r["half_hardy"]),
                    "voltage_27": rational_json(r["voltage_27"]),
                    "double_voltage_le_hardy": r["double_voltage_le_hardy"],
                    "voltage27_le_half_hardy": r["voltage27_le_half_hardy"],
                }
                for r in rows
            ]
            write_json(run / "tables" / "bounds.json", {"rows": payload})
            target = run / "tables" / "bounds.json"
        else:
            header = [
                "n",
                "lower_quadratic",
                "lower_quadratic_decimal",
                "singular_voltage",
                "singular_voltage_decimal",
                "hardy",
                "hardy_decimal",
                "half_hardy",
                "half_hardy_decimal",
                "voltage_27",
                "voltage_27_decimal",
                "double_voltage_le_hardy",
                "voltage27_le_half_hardy",
            ]
            csv_rows = [
                [
                    r["n"],
                    format_rational(r["lower_quadratic"]),
                    rational_to_decimal(r["lower_quadratic"]),
                    format_rational(r["singular_voltage"]),
                    rational_to_decimal(r["singular_voltage"]),
                    format_rational(r["hardy"]),
                    rational_to_decimal(r["hardy"]),
                    format_rational(r["half_hardy"]),
                    rational_to_decimal(r["half_hardy"]),
                    format_rational(r["voltage_27"]),
                    rational_to_decimal(r["voltage_27"]),
                    r["double_voltage_le_hardy"],
                    r["voltage27_le_half_hardy"],
                ]
                for r in rows
            ]
            write_csv(run / "tables" / "bounds.csv", header, csv_rows)
            target = run / "tables" / "bounds.csv"
    except OSError as exc:
        print(f"bounds: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(target)
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------


def _one_certificate(selector: str, n: int) -> dict:
    if selector == "m3-gap":
        cert = certify.certify_m3_gap(n)
    elif selector == "m2-subsolution":
        cert = certify.certify_m2_subsolution(n)
    elif selector == "m3-stability":
        cert = certify.certify_m3_stability(n)
    else:  # pragma: no cover - guarded by argparse choices
        raise ValueError(selector)
    return cert.to_json_dict()


def cmd_certify(args) -> int:
    cfg = _load_config(args)
    n_min, n_max = parse_range(args.n)
    if not 1 <= n_min <= n_max:
        print("certify: invalid dimension range", file=sys.stderr)
        return EXIT_USAGE
    run = run_directory(
        _out_root(args),
        "certify",
        {"claim": args.claim, "n": [n_min, n_max], "config": cfg.to_json_dict()},
    )
    write_json(
        run / "config.json",
        {"command": "certify", "claim": args.claim, "n": [n_min, n_max],
         "config": cfg.to_json_dict()},
    )
    statuses = []
    if args.claim == "thresholds":
        cert = certify.certify_thresholds(n_min, n_max)
        write_json(run / "certificates" / f"thresholds-{n_min}-{n_max}.json", cert.to_json_dict())
        rows = certify.threshold_table(n_min, n_max)
        write_csv(
            run / "tables" / "thresholds.csv",
            [
                "n", "singular_voltage", "hardy",
                "double_voltage_le_hardy", "voltage27_le_half_hardy", "voltage_positive",
            ],
            [
                [
                    r.dimension,
                    format_rational(r.singular_voltage),
                    format_rational(r.hardy),
                    r.double_voltage_le_hardy,
                    r.voltage27_le_half_hardy,
                    r.voltage_positive,
                ]
                for r in rows
            ],
        )
        statuses.append(cert.status)
    else:
        dims = list(range(n_min, n_max + 1))
        if cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(_one_certificate, [args.claim] * len(dims), dims))
        else:
            results = [_one_certificate(args.claim, n) for n in dims]
        for n, payload in zip(dims, results):
            write_json(run / "certificates" / f"{args.claim}-{n}.json", payload)
            statuses.append(payload["status"])
    print(run)
    if any(s == "falsified" for s in statuses):
        return EXIT_FALSIFIED
    if any(s == "inconclusive" for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------
# branch / pullin / profile
# ---------------------------------------------------------------------------


def _branch_record(pt: BranchPoint) -> dict:
    return {
        "schema_version": 1,
        "lambda": pt.lam,
        "max_value": pt.max_value,
        "mu1": pt.mu1,
        "residual": pt.residual,
        "energy_h2": pt.energy_h2,
        "energy_cubed": pt.energy_cubed,
    }


def _write_profile(path: Path, radii, values) -> None:
    write_csv(path, ["r", "u"], [[f"{r:.17g}", f"{u:.17g}"] for r, u in zip(radii, values)])


def _auto_lambda_grid(cfg: RunConfig, dim: int, count: int = 12) -> list[float]:
    grid = build_grid(cfg.mesh, cfg.gamma, dim)
    est = pull_in_voltage(cfg.boundary, grid, rel_width=1e-3, tol=cfg.tol)
    return list(np.linspace(est.lambda_lo / count, 0.98 * est.lambda_lo, count))


def cmd_branch(args) -> int:
    cfg = _load_config(args)
    dim = cfg.dimensions[0]
    try:
        lambdas = parse_lambda_spec(args.lam)
    except ValueError as exc:
        print(f"branch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if lambdas is None:
        lambdas = _auto_lambda_grid(cfg, dim)
    run = run_directory(
        _out_root(args),
        "branch",
        {"dim": dim, "lambdas": lambdas, "config": cfg.to_json_dict()},
    )
    write_json(
        run / "config.json",
        {"command": "branch", "dim": dim, "lambdas": lambdas, "config": cfg.to_json_dict()},
    )
    grid = build_grid(cfg.mesh, cfg.gamma, dim)
    result = continue_branch(cfg.boundary, grid, lambdas, tol=cfg.tol)
    records = [_branch_record(pt) for pt in result.points]
    if result.stopped_at is not None:
        records.append(
            {
                "schema_version": 1,
                "diverged_at": result.stopped_at,
                "reason": result.divergence.reason,
            }
        )
    write_jsonl(run / "branch.jsonl", records)
    if args.profiles and result.points:
        idx = np.unique(
            np.linspace(0, len(result.points) - 1, args.profiles).astype(int)
        )
        for i in idx:
            pt = result.points[i]
            _write_profile(
                run / "profiles" / f"lambda-{pt.lam:.6g}.csv",
                grid.nodes,
                pt.field.values,
            )
    print(run)
    if not result.points:
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_pullin(args) -> int:
    cfg = _load_config(args)
    dim = cfg.dimensions[0]
    grid = build_grid(cfg.mesh, cfg.gamma, dim)
    est = pull_in_voltage(
        cfg.boundary, grid, rel_width=cfg.rel_width, tol=cfg.tol, method=args.method
    )
    verdict = regularity_verdict(est, est.near_fold, dim)
    run = run_directory(
        _out_root(args), "pullin", {"dim": dim, "config": cfg.to_json_dict()}
    )
    write_json(
        run / "config.json",
        {"command": "pullin", "dim": dim, "config": cfg.to_json_dict()},
    )
    payload = {
        "dim": dim,
        "lambda_lo": est.lambda_lo,
        "lambda_hi": est.lambda_hi,
        "method": est.method,
        "analytic_lower": None
        if est.analytic_lower is None
        else rational_json(est.analytic_lower),
        "analytic_upper": est.analytic_upper,
        "consistent": est.consistent,
        "near_fold_max": est.near_fold.max_value,
        "near_fold_mu1": est.near_fold.mu1,
        "regularity_verdict": verdict,
        "notes": est.notes,
    }
    write_json(run / "pullin.json", payload)
    _write_profile(
        run / "profiles" / "near-fold.csv", grid.nodes, est.near_fold.field.values
    )
    print(run)
    if est.consistent is False or any("flagged" in n for n in est.notes):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_profile(args) -> int:
    cfg = _load_config(args)
    dim = cfg.dimensions[0]
    grid = build_grid(cfg.mesh, cfg.gamma, dim)
    pt = minimal_solution(float(args.lam), cfg.boundary, grid, tol=cfg.tol)
    run = run_directory(
        _out_root(args),
        "profile",
        {"dim": dim, "lambda": float(args.lam), "config": cfg.to_json_dict()},
    )
    write_json(
        run / "config.json",
        {"command": "profile", "dim": dim, "lambda": float(args.lam),
         "config": cfg.to_json_dict()},
    )
    if isinstance(pt, BranchPoint):
        _write_profile(run / "profiles" / f"lambda-{pt.lam:.6g}.csv", grid.nodes, pt.field.values)
        write_json(run / "point.json", _branch_record(pt))
        print(run)
        return EXIT_OK
    write_json(
        run / "divergence.json",
        {"lambda": pt.lam, "reason": pt.reason, "last_max": pt.last_max},
    )
    print(run)
    return EXIT_FALSIFIED


# ---------------------------------------------------------------------------
# search-subsolution
# ---------------------------------------------------------------------------


def cmd_search(args) -> int:
    cfg = _load_config(args)
    dim = cfg.dimensions[0]
    if not 9 <= dim <= 16:
        print(
            f"search-subsolution: dimension {dim} outside the open range 9..16 "
            "(treating as a sanity run)",
            file=sys.stderr,
        )
    lam = Fraction(args.lam) if args.lam else None
    try:
        if args.family == "perturbed-touchdown":
            alphas = parse_fraction_grid(args.alpha_grid) if args.alpha_grid else []
            betas = parse_fraction_grid(args.beta_grid) if args.beta_grid else []
            grid_params = [(a, b) for a in alphas for b in betas]
        else:
            grid_params = parse_fraction_grid(args.m) if args.m else []
    except (ValueError, ZeroDivisionError) as exc:
        print(f"search-subsolution: bad family spec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = certify.subsolution_search(dim, args.family, grid_params, lam=lam)
    run = run_directory(
        _out_root(args),
        "search-subsolution",
        {
            "dim": dim,
            "family": args.family,
            "params": [str(p) for p in grid_params],
            "config": cfg.to_json_dict(),
        },
    )
    write_json(
        run / "config.json",
        {"command": "search-subsolution", "dim": dim, "family": args.family,
         "config": cfg.to_json_dict()},
    )
    write_json(run / "search.json", report.to_json_dict())
    print(run)
    print(f"candidates: {len(report.candidates)}, passing: {len(report.passing)}")
    statuses = [
        c.status for cand in report.candidates for c in cand.checks.values()
    ]
    if any(s == "inconclusive" for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="mems4", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="exact bound and threshold table")
    p.add_argument("--n", default="1..40", help="dimension range, e.g. 1..40")
    _common_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", help="exact-arithmetic certificates")
    p.add_argument("claim", choices=CLAIM_SELECTORS)
    p.add_argument("--n", default="17..30", help="dimension range")
    _common_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("branch", help="minimal-branch sweep")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="auto", help="start:stop:count or auto")
    p.add_argument("--profiles", type=int, default=0, help="dump k profiles")
    _common_flags(p)
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("pullin", help="pull-in voltage bracket")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument(
        "--method",
        choices=("bisection-on-convergence", "mu1-extrapolation"),
        default="bisection-on-convergence",
    )
    _common_flags(p)
    p.set_defaults(func=cmd_pullin)

    p = sub.add_parser("profile", help="single deflection profile")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True, type=float)
    _common_flags(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("search-subsolution", help="parametrized sub-solution search")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--alpha-grid", dest="alpha_grid", help="rational grid start:stop:count")
    p.add_argument("--beta-grid", dest="beta_grid", help="rational grid start:stop:count")
    p.add_argument("--m", help="profile parameters, single value or start:stop:count")
    p.add_argument("--lambda", dest="lam", help="voltage (exact rational); default H_N/2")
    _common_flags(p)
    p.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"mems4: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mems4: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
