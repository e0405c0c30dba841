"""Asymmetric branch of the Loop and Rod systems.

Writing ``x = z1**(1/k)``, ``y = z2**(1/k)`` and ``t = lam**(1/k)``, every
solution with ``z1 != z2`` lies on a curve ``y = y(x)`` and satisfies
``t = phi(x)`` for a branch map ``phi``. Closed forms exist for

* ``k = 3``: dividing the two cube-root equations leaves
  ``x + y = 1/(x y)``, for both Loop and Rod;
* ``k = 2``: subtracting the equations and reusing the first one leaves
  ``z1 * z2 = 1``, i.e. ``y = 1/x``.

``phi`` tends to infinity at both ends of ``(0, inf)`` and has one minimum,
at the point where the curve meets the diagonal. That minimum is the
critical activity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._numerics import bisect, golden_section
from .errors import UnsupportedCase
from .graphs import FertileGraph

__all__ = [
    "asymmetric_constraint_y",
    "phi_loop_k3",
    "phi_loop_k3_excess",
    "phi_loop_k3_textbook_form",
    "phi_rod_k3",
    "phi_loop_k2",
    "phi_rod_k2",
    "loop_k3_octic",
    "loop_k3_branch_polynomial",
    "real_roots",
    "BranchMap",
    "branch_map",
    "branch_roots",
]


def asymmetric_constraint_y(x: float) -> float:
    """Positive root ``y`` of ``x y (x + y) = 1``.

    Equal to ``(sqrt(x**4 + 4x) - x**2) / (2x)``, written without the
    subtraction so it stays accurate for large ``x``.
    """
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    return 2.0 / (math.sqrt(x**4 + 4.0 * x) + x * x)


def phi_loop_k3_excess(x):
    """``phi_loop_k3(x) - x``, computed without cancellation.

    The numerator of ``phi - x`` simplifies to
    ``4 / (2 + x^3 + x S)`` with ``S = sqrt(x^4 + 4x)``, so the excess is a
    product of positive factors. Works on arrays.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(x**4 + 4.0 * x)
    out = 4.0 / ((2.0 + x**3 + x * s) * (s + x * x) * (1.0 + x**3))
    return out if out.ndim else float(out)


def phi_loop_k3(x):
    """Cube root of the activity along the Loop, k = 3 asymmetric branch.

    This is the positive root ``t1`` of
    ``x (x^3+1)^2 t^2 - x^2 (x^6-1) t - (2x^6 + 2x^3 + 1) = 0``.
    """
    x = np.asarray(x, dtype=float)
    out = x + phi_loop_k3_excess(x)
    return out if np.ndim(out) else float(out)


def phi_loop_k3_textbook_form(x):
    """The same ``t1`` in its textbook form; loses accuracy for large x."""
    x = np.asarray(x, dtype=float)
    out = (x**2 * (x**3 - 1) + (x**3 + 1) * np.sqrt(x**4 + 4 * x)) / (2 * x * (x**3 + 1))
    return out if out.ndim else float(out)


def phi_rod_k3(x: float) -> float:
    """Rod, k = 3: first cube-root equation solved for ``t`` on the curve."""
    y = asymmetric_constraint_y(x)
    return x * (x**3 + y**3) / (1.0 + x**3)


def _k2_sum(x: float) -> float:
    # s = z1 + z2 on the curve z1 z2 = 1
    return x * x + 1.0 / (x * x)


def phi_loop_k2(x: float) -> float:
    """Loop, k = 2. With ``s = z1 + z2`` the subtracted system reads
    ``(1 + s)^2 = lam (2 + s)``; so ``t = (1 + s) / sqrt(2 + s)``."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    s = _k2_sum(x)
    return (1.0 + s) / math.sqrt(2.0 + s)


def phi_rod_k2(x: float) -> float:
    """Rod, k = 2: ``s^2 = lam (2 + s)``, so ``t = s / sqrt(2 + s)``."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    s = _k2_sum(x)
    return s / math.sqrt(2.0 + s)


@dataclass(frozen=True)
class BranchMap:
    graph: FertileGraph
    k: int
    phi: Callable[[float], float]
    y: Callable[[float], float]
    x_diag: float  # where the curve meets y = x

    def field(self, x: float) -> tuple[float, float]:
        return (x**self.k, self.y(x) ** self.k)


_BRANCHES = {
    (FertileGraph.LOOP, 3): BranchMap(FertileGraph.LOOP, 3, phi_loop_k3, asymmetric_constraint_y, 2.0 ** (-1 / 3)),
    (FertileGraph.ROD, 3): BranchMap(FertileGraph.ROD, 3, phi_rod_k3, asymmetric_constraint_y, 2.0 ** (-1 / 3)),
    (FertileGraph.LOOP, 2): BranchMap(FertileGraph.LOOP, 2, phi_loop_k2, lambda x: 1.0 / x, 1.0),
    (FertileGraph.ROD, 2): BranchMap(FertileGraph.ROD, 2, phi_rod_k2, lambda x: 1.0 / x, 1.0),
}


def branch_map(g, k: int) -> BranchMap:
    g = FertileGraph.parse(g)
    try:
        return _BRANCHES[(g, int(k))]
    except KeyError:
        raise UnsupportedCase(f"no closed-form branch for graph={g.value}, k={k}") from None


def has_branch_map(g, k: int) -> bool:
    return (FertileGraph.parse(g), int(k)) in _BRANCHES


# --- polynomial route (Loop, k = 3) -------------------------------------


def loop_k3_octic(t: float) -> np.ndarray:
    """Coefficients, highest degree first, of the degree-8 factor
    ``t x^8 - t^2 x^7 + 2x^6 - 2t^2 x^4 + 2x^3 - t x^2 - t^2 x + 1``."""
    t2 = t * t
    return np.array([t, -t2, 2.0, 0.0, -2.0 * t2, 2.0, -t, -t2, 1.0])


def _polyval_scale(p: np.ndarray, x: float) -> float:
    return float(np.polyval(np.abs(p), abs(x)))


def real_roots(p, lo: float, hi: float, rtol: float = 1e-12) -> list[float]:
    """All real roots of the polynomial ``p`` in ``[lo, hi]``.

    Roots of the derivative split ``[lo, hi]`` into pieces where ``p`` is
    monotone, so each piece holds at most one simple root and bisection
    finds it. A critical point where ``|p|`` is below ``rtol`` times the
    absolute-coefficient scale is reported as a (multiple) root. Roots
    closer than ``1e-7 (1 + |x|)`` are merged, preferring a critical point.
    """
    p = np.trim_zeros(np.asarray(p, dtype=float), "f")
    deg = len(p) - 1
    if deg < 1:
        return []
    if deg == 1:
        r = -p[1] / p[0]
        return [float(r)] if lo <= r <= hi else []
    crit = real_roots(np.polyder(p), lo, hi, rtol)

    def f(x):
        return float(np.polyval(p, x))

    found: list[tuple[float, bool]] = []
    for c in crit:
        if abs(f(c)) <= rtol * _polyval_scale(p, c):
            found.append((c, True))
    knots = [lo] + [c for c in crit if lo < c < hi] + [hi]
    for a, b in zip(knots[:-1], knots[1:]):
        fa, fb = f(a), f(b)
        if fa == 0:
            found.append((a, False))
        if fa * fb < 0:
            found.append((bisect(f, a, b), False))
    if f(hi) == 0:
        found.append((hi, False))

    found.sort()
    merged: list[tuple[float, bool]] = []
    for x, is_crit in found:
        if merged and abs(x - merged[-1][0]) <= 1e-7 * (1.0 + abs(x)):
            if is_crit and not merged[-1][1]:
                merged[-1] = (x, True)
            continue
        merged.append((x, is_crit))
    return [float(x) for x, _ in merged]


def loop_k3_branch_polynomial(lam: float) -> list[float]:
    """Positive roots ``x`` of the Loop, k = 3 octic that lie on the valid
    branch ``t = phi_loop_k3(x)``, with ``t = lam**(1/3)``.

    At the critical activity the two roots coincide and one double root is
    returned.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam!r}")
    t = lam ** (1.0 / 3.0)
    p = loop_k3_octic(t)
    bound = 1.0 + float(np.max(np.abs(p[1:]))) / abs(p[0])  # Cauchy
    roots = [x for x in real_roots(p, 0.0, bound) if x > 0]
    # the other quadratic root t2 is negative, so this only drops round-off junk
    return [float(x) for x in roots if abs(phi_loop_k3(x) - t) <= 1e-9 * max(1.0, t)]


# --- generic scan route --------------------------------------------------

_SCAN = np.logspace(-9, 9, 3601)


def branch_roots(bm: BranchMap, lam: float, rtol: float = 1e-12) -> list[float]:
    """Solve ``phi(x) = lam**(1/k)`` by scanning a log grid for sign changes.

    Grid-local minima of ``phi - t`` are refined by golden section so that
    tangencies and pairs of roots falling between two grid points are not
    missed.
    """
    t = lam ** (1.0 / bm.k)
    tol = rtol * max(1.0, t)

    def f(x):
        return bm.phi(x) - t

    xs = _SCAN
    fs = np.array([f(x) for x in xs])
    roots: list[float] = []
    for i in range(len(xs) - 1):
        if fs[i] == 0:
            roots.append(float(xs[i]))
        elif fs[i] * fs[i + 1] < 0:
            roots.append(bisect(f, float(xs[i]), float(xs[i + 1])))
    for i in range(1, len(xs) - 1):
        if not (fs[i] <= fs[i - 1] and fs[i] <= fs[i + 1] and fs[i] > 0):
            continue
        lo, hi = float(xs[i - 1]), float(xs[i + 1])
        xm = golden_section(f, lo, hi)
        fm = f(xm)
        if abs(fm) <= tol:
            roots.append(xm)
        elif fm < 0:
            roots.extend([bisect(f, lo, xm), bisect(f, xm, hi)])
    roots.sort()
    out: list[float] = []
    for x in roots:
        if not out or abs(x - out[-1]) > 1e-7 * (1.0 + x):
            out.append(x)
    return out
