"""Command-line front end.

    hardcore-tree solve --graph loop --k 3 --lambda 2 --format json
    hardcore-tree sweep --graph loop --k 3 --lambda-min 0.5 --lambda-max 3 --steps 200 --format csv
    hardcore-tree critical --graph rod --k 3
    hardcore-tree convexity
    hardcore-tree verify-consistency --graph key --k 2 --depth 2 --lambda 3

Exit status: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .bifurcation import find_lambda_cr, sweep, verify_convexity_loop_k3
from .diagram import fmt, sweep_to_csv, sweep_to_svg
from .errors import SolverError, UnsupportedCase
from .graphs import FertileGraph
from .oracle import NAIVE_LIMIT, FiniteTree, consistency_defect
from .recursion import ModelParams
from .solver import solve_all

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 2, 3
COMMANDS = ("solve", "sweep", "critical", "convexity", "verify-consistency")
DEFECT_TOL = 1e-12


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: FertileGraph = FertileGraph.LOOP
    k: int = 3
    lam: Optional[float] = None
    lambda_min: Optional[float] = None
    lambda_max: Optional[float] = None
    steps: int = 200
    depth: int = 2
    format: str = "text"
    out: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.k < 1:
            raise UsageError("--k: must be an integer >= 1")
        if self.command in ("solve", "verify-consistency"):
            if self.lam is None:
                raise UsageError("--lambda: required")
            if not self.lam > 0:
                raise UsageError("--lambda: must be positive")
        allowed = {
            "solve": ("text", "json"),
            "sweep": ("text", "json", "csv", "svg"),
            "critical": ("text", "json"),
            "convexity": ("text", "json"),
            "verify-consistency": ("text", "json"),
        }[self.command]
        if self.format not in allowed:
            raise UsageError(f"--format: {self.command} supports {', '.join(allowed)}")
        if self.command == "sweep":
            if self.lambda_min is None or self.lambda_max is None:
                raise UsageError("--lambda-min/--lambda-max: required for sweep")
            if not self.lambda_min > 0:
                raise UsageError("--lambda-min: must be positive")
            if not self.lambda_min < self.lambda_max:
                raise UsageError("--lambda-max: must exceed --lambda-min")
            if self.steps < 2:
                raise UsageError("--steps: must be >= 2")
        if self.command == "verify-consistency":
            if self.depth < 1:
                raise UsageError("--depth: must be >= 1")
            n = FiniteTree.cayley(self.k, self.depth).n_vertices if self.k ** self.depth < 10**6 else 10**6
            if 3**n > NAIVE_LIMIT:
                raise UsageError(f"--depth: tree with k={self.k}, depth={self.depth} is too large to enumerate")


def parse_lambda(text: str) -> float:
    """Decimal or exact rational ``p/q``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or p/q rational: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hardcore-tree", description="Translation-invariant Gibbs measures of fertile hard-core models")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, lam=False):
        p.add_argument("--graph", default="loop", type=str.lower, choices=[m.value for m in FertileGraph])
        p.add_argument("--k", type=int, default=3)
        if lam:
            p.add_argument("--lambda", dest="lam", type=parse_lambda, required=True)
        p.add_argument("--format", default="text", choices=["text", "json", "csv", "svg"])
        p.add_argument("--out", default=None, help="write here instead of stdout")

    common(sub.add_parser("solve", help="all fixed points at one activity"), lam=True)
    sw = sub.add_parser("sweep", help="solution counts over an activity grid")
    common(sw)
    sw.add_argument("--lambda-min", type=parse_lambda, required=True)
    sw.add_argument("--lambda-max", type=parse_lambda, required=True)
    sw.add_argument("--steps", type=int, default=200)
    common(sub.add_parser("critical", help="critical activity from the branch map"))
    cv = sub.add_parser("convexity", help="numerical convexity check of the Loop k=3 branch map")
    cv.add_argument("--format", default="text", choices=["text", "json", "csv", "svg"])
    cv.add_argument("--out", default=None)
    vc = sub.add_parser("verify-consistency", help="finite-tree consistency check at the fixed points")
    common(vc, lam=True)
    vc.add_argument("--depth", type=int, default=2)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    if "graph" in kw:
        kw["graph"] = FertileGraph.parse(kw["graph"])
    return RunConfig(**kw)


# --- commands ----------------------------------------------------------------


def _solve(cfg: RunConfig) -> str:
    sset = solve_all(cfg.graph, ModelParams(cfg.k, cfg.lam))
    if cfg.format == "json":
        doc = {
            "graph": cfg.graph.value,
            "k": cfg.k,
            "lambda": cfg.lam,
            "count": sset.count,
            "empirical_count": sset.empirical,
            "solutions": [
                {
                    "z1": s.z.z1,
                    "z2": s.z.z2,
                    "branch": s.branch.value,
                    "residual": s.residual_norm,
                    "note": s.multiplicity_note,
                }
                for s in sset
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"graph = {cfg.graph.value}; k = {cfg.k}; lambda = {fmt(cfg.lam)}"]
    lines.append(f"count = {sset.count}" + (" (empirical count)" if sset.empirical else ""))
    for s in sset:
        note = f"  [{s.multiplicity_note}]" if s.multiplicity_note else ""
        lines.append(f"z = ({fmt(s.z.z1)}, {fmt(s.z.z2)})  {s.branch.value}  residual = {fmt(s.residual_norm)}{note}")
    return "\n".join(lines) + "\n"


def _sweep(cfg: RunConfig) -> str:
    grid = np.linspace(cfg.lambda_min, cfg.lambda_max, cfg.steps)
    pts = sweep(cfg.graph, cfg.k, grid)
    if cfg.format == "csv":
        return sweep_to_csv(pts)
    if cfg.format == "svg":
        return sweep_to_svg(pts, title=f"{cfg.graph.value}, k = {cfg.k}")
    if cfg.format == "json":
        doc = [
            {"lambda": p.lam, "count": p.count, "z1": list(p.z1_values), "error": p.error}
            for p in pts
        ]
        return json.dumps({"graph": cfg.graph.value, "k": cfg.k, "points": doc}, indent=2) + "\n"
    lines = [f"{fmt(p.lam)}  {'failed' if p.failed else p.count}  {' '.join(fmt(v) for v in p.z1_values)}" for p in pts]
    return "\n".join(lines) + "\n"


def _critical(cfg: RunConfig) -> str:
    cp = find_lambda_cr(cfg.graph, cfg.k)
    if cfg.format == "json":
        doc = {
            "graph": cfg.graph.value,
            "k": cfg.k,
            "lambda_cr": cp.lambda_cr,
            "x_star": cp.x_star,
            "z_star": list(cp.z_star),
            "residual": cp.residual_norm,
        }
        return json.dumps(doc, indent=2) + "\n"
    return (
        f"lambda_cr = {fmt(cp.lambda_cr)}\n"
        f"x_star = {fmt(cp.x_star)}\n"
        f"z_star = ({fmt(cp.z_star.z1)}, {fmt(cp.z_star.z2)})\n"
    )


def _convexity(cfg: RunConfig) -> tuple[int, str]:
    rep = verify_convexity_loop_k3(raise_on_violation=False)
    status = EXIT_OK if rep.ok else EXIT_FAILURE
    if cfg.format == "json":
        doc = {
            "grid_size": rep.grid_size,
            "violations": rep.violations,
            "min_second_difference": rep.min_second_difference,
            "second_difference_at_min": rep.second_difference_at_min,
            "alpha_at_1": rep.alpha_at_1,
            "alpha_positive_roots": rep.alpha_positive_roots,
            "alpha_positive_for_cube_above_2": rep.alpha_positive_for_cube_above_2,
            "pass": rep.ok,
        }
        return status, json.dumps(doc, indent=2) + "\n"
    roots = ", ".join(fmt(r) for r in rep.alpha_positive_roots)
    return status, (
        f"grid points = {rep.grid_size}; violations = {len(rep.violations)}\n"
        f"second difference at minimiser = {fmt(rep.second_difference_at_min)}\n"
        f"alpha(1) = {rep.alpha_at_1}; positive roots of alpha: {roots}\n"
        f"{'PASS' if rep.ok else 'FAIL'}\n"
    )


def _verify(cfg: RunConfig) -> tuple[int, str]:
    p = ModelParams(cfg.k, cfg.lam)
    sset = solve_all(cfg.graph, p)
    rows = [(s, consistency_defect(cfg.graph, p, cfg.depth, s.z)) for s in sset]
    ok = all(d <= DEFECT_TOL for _, d in rows)
    status = EXIT_OK if ok else EXIT_FAILURE
    if cfg.format == "json":
        doc = {
            "graph": cfg.graph.value,
            "k": cfg.k,
            "lambda": cfg.lam,
            "depth": cfg.depth,
            "results": [{"z1": s.z.z1, "z2": s.z.z2, "defect": d, "pass": d <= DEFECT_TOL} for s, d in rows],
        }
        return status, json.dumps(doc, indent=2) + "\n"
    lines = []
    for s, d in rows:
        prefix = f"z = ({fmt(s.z.z1)}, {fmt(s.z.z2)}): " if len(rows) > 1 else ""
        lines.append(f"{prefix}defect = {fmt(d)}; {'PASS' if d <= DEFECT_TOL else 'FAIL'}")
    return status, "\n".join(lines) + "\n"


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Validate, dispatch, emit. Returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
    except UsageError as exc:
        print(f"hardcore-tree: error: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        if cfg.command == "solve":
            status, text = EXIT_OK, _solve(cfg)
        elif cfg.command == "sweep":
            status, text = EXIT_OK, _sweep(cfg)
        elif cfg.command == "critical":
            status, text = EXIT_OK, _critical(cfg)
        elif cfg.command == "convexity":
            status, text = _convexity(cfg)
        else:
            status, text = _verify(cfg)
    except UnsupportedCase as exc:
        print(f"hardcore-tree: error: --graph/--k: {exc}", file=stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"hardcore-tree: failure: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_FAILURE
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
