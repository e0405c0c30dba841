"""Critical activities, convexity of the Loop branch map, and activity sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._numerics import bisect, golden_section
from .branch import (
    BranchMap,
    asymmetric_constraint_y,
    branch_map,
    phi_loop_k3,
    phi_loop_k3_excess,
    real_roots,
)
from .errors import ConvexityViolation, SolverError
from .graphs import FertileGraph
from .recursion import Field, ModelParams, map_batch
from .solver import Branch, solve_all

__all__ = [
    "BranchPoint",
    "CriticalPoint",
    "find_lambda_cr",
    "ALPHA_COEFFS",
    "alpha_poly",
    "ConvexityReport",
    "verify_convexity_loop_k3",
    "SweepPoint",
    "sweep",
]

# golden section runs on log x over [1e-3, 1e3]
_LOG_LO, _LOG_HI = math.log(1e-3), math.log(1e3)
_FD_STEP = 1e-7


@dataclass(frozen=True)
class BranchPoint:
    x: float
    y: float
    t: float

    @classmethod
    def on(cls, bm: BranchMap, x: float) -> "BranchPoint":
        return cls(x, bm.y(x), bm.phi(x))


@dataclass(frozen=True)
class CriticalPoint:
    graph: FertileGraph
    k: int
    lambda_cr: float
    x_star: float
    z_star: Field
    branch_point: BranchPoint
    residual_norm: float


def _fd_derivative(f, x: float, h: float = _FD_STEP) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def find_lambda_cr(g: FertileGraph, k: int = 3) -> CriticalPoint:
    """Minimise the branch map to get the activity where the asymmetric pair
    is born.

    Golden section on ``log x`` gives a first estimate; the minimiser is then
    pinned down by bisection on a central-difference derivative, which is
    accurate to ~1e-10 where the value-based search stalls at ~1e-8.

    Raises
    ------
    UnsupportedCase
        Outside (Loop, 2), (Loop, 3), (Rod, 2), (Rod, 3).
    """
    g = FertileGraph.parse(g)
    bm = branch_map(g, k)
    u0 = golden_section(lambda u: bm.phi(math.exp(u)), _LOG_LO, _LOG_HI, tol=1e-12)
    x0 = math.exp(u0)

    def dphi(x):
        return _fd_derivative(bm.phi, x)

    w = 1e-4 * x0
    lo, hi = x0 - w, x0 + w
    while dphi(lo) >= 0 and lo > 2 * _FD_STEP:
        lo = max(lo - 4 * w, 0.5 * lo)
    while dphi(hi) <= 0:
        hi += 4 * w
    x_star = bisect(dphi, lo, hi)
    t = bm.phi(x_star)
    lam = t**k
    z = Field(*bm.field(x_star))
    zz = np.asarray(z)
    res = float(np.max(np.abs(zz - map_batch(g, k, lam, zz))))
    return CriticalPoint(g, k, lam, x_star, z, BranchPoint.on(bm, x_star), res)


# --- convexity of phi for Loop, k = 3 --------------------------------------

# coefficients of x^26 down to x^0
ALPHA_COEFFS = (
    1, 0, 0, 14, 24, 0, 79, 240, 0, -1492, -5976, -7776, 7327, 29568,
    38448, -6466, -25368, -33984, 289, 1584, 2160, 104, 600, 864, 16, 96, 144,
)


def alpha_poly(x):
    """Evaluate the degree-26 positivity certificate by Horner's rule.

    Integer (or Fraction) input stays exact.
    """
    acc = 0
    for c in ALPHA_COEFFS:
        acc = acc * x + c
    return acc


@dataclass
class ConvexityReport:
    grid_size: int
    violations: list[float]
    min_second_difference: float
    second_difference_at_min: float
    alpha_at_1: int
    alpha_positive_roots: list[float]
    alpha_positive_for_cube_above_2: bool

    @property
    def ok(self) -> bool:
        return not self.violations and self.alpha_at_1 > 0 and self.alpha_positive_for_cube_above_2


def default_convexity_grid() -> np.ndarray:
    return np.logspace(-3, 3, 2000)


def _second_differences(x: np.ndarray, rel_step: float = 1e-5) -> np.ndarray:
    # phi = x + excess and x has zero second difference, so difference the
    # excess only; phi itself is ~x and buries phi'' ~ x^-10 in round-off
    h = rel_step * x
    g = phi_loop_k3_excess
    return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h)


def verify_convexity_loop_k3(grid: Optional[Sequence[float]] = None, raise_on_violation: bool = True) -> ConvexityReport:
    """Numerical check that the Loop, k = 3 branch map is strictly convex.

    Raises
    ------
    ConvexityViolation
        When some second difference is not positive (and ``raise_on_violation``).
    """
    x = default_convexity_grid() if grid is None else np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size == 0 or np.any(x <= 0) or np.any(np.diff(x) < 0):
        raise ValueError("grid must be a non-empty sorted sequence of positive numbers")
    d2 = _second_differences(x)
    bad = [float(v) for v in x[~(d2 > 0)]]
    x_star = 2.0 ** (-1 / 3)
    d2_star = float(_second_differences(np.array([x_star]))[0])

    coeffs = np.array(ALPHA_COEFFS, dtype=float)
    roots = [r for r in real_roots(coeffs, 0.0, 1.0 + float(np.max(np.abs(coeffs[1:])))) if r > 0]
    beyond = np.logspace(math.log10(2.0 ** (1 / 3)), 3, 2000)
    report = ConvexityReport(
        grid_size=int(x.size),
        violations=bad,
        min_second_difference=float(np.min(d2)),
        second_difference_at_min=d2_star,
        alpha_at_1=int(alpha_poly(1)),
        alpha_positive_roots=roots,
        alpha_positive_for_cube_above_2=bool(np.all(np.polyval(coeffs, beyond) > 0)),
    )
    if bad and raise_on_violation:
        raise ConvexityViolation(bad)
    return report


# --- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    lam: float
    count: Optional[int]
    z1_values: tuple[float, ...] = ()
    z1_sym: Optional[float] = None
    z1_low: Optional[float] = None
    z1_high: Optional[float] = None
    empirical: bool = False
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def sweep(g: FertileGraph, k: int, lambda_grid: Sequence[float]) -> list[SweepPoint]:
    """Solve at every activity of ``lambda_grid`` (in order).

    ``z1_sym`` is the symmetric solution, ``z1_low``/``z1_high`` the smallest
    and largest ``z1`` among the others. A point whose solve fails is kept
    with ``count=None`` and the error text; the sweep carries on.
    """
    g = FertileGraph.parse(g)
    lams = [float(v) for v in lambda_grid]
    if any(not (math.isfinite(v) and v > 0) for v in lams):
        raise ValueError("lambda grid must be positive and finite")
    if any(b < a for a, b in zip(lams, lams[1:])):
        raise ValueError("lambda grid must be sorted")
    out = []
    for lam in lams:
        try:
            sset = solve_all(g, ModelParams(k, lam))
        except SolverError as exc:
            out.append(SweepPoint(lam, None, error=f"{type(exc).__name__}: {exc}"))
            continue
        sym = [s.z.z1 for s in sset if s.branch is Branch.SYMMETRIC]
        asym = sorted(s.z.z1 for s in sset if s.branch is Branch.ASYMMETRIC)
        out.append(
            SweepPoint(
                lam,
                sset.count,
                tuple(sset.z1_values()),
                sym[0] if sym else None,
                asym[0] if asym else None,
                asym[-1] if asym else None,
                sset.empirical,
            )
        )
    return out
