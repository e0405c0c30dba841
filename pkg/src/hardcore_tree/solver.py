"""Find every translation-invariant fixed point at given (graph, k, lambda).

Three routes feed one deduplicated set:

1. the symmetric branch ``z1 = z2`` (Loop and Rod) by bisection on a
   monotone scalar equation;
2. closed-form branch roots for (Loop, 3), (Rod, 3) mapped back through
   ``z_i = x**3, y(x)**3`` and completed by the swap;
3. multistart damped Newton on the full two-dimensional system, seeded on a
   log grid. This is the only route for Key, Whistle and other tree orders.

For Loop and Rod, asymmetric candidates are confirmed on the *deflated*
system where the factor ``z1 - z2`` has been divided out. At the critical
activity the full system has a pitchfork and Newton stalls about
``eps**(1/3)`` away from the true root; on the deflated system the same
point is only a fold, which pins it down to ``eps**(1/2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._numerics import bisect
from .branch import branch_map, branch_roots, loop_k3_branch_polynomial
from .errors import BracketFailure, ConvergenceFailure, UnsupportedCase
from .graphs import FertileGraph
from .recursion import Field, ModelParams, jacobian_batch, map_batch

__all__ = [
    "Branch",
    "Solution",
    "SolutionSet",
    "solve_symmetric",
    "solve_all",
    "multistart_newton",
    "closed_form_candidates",
    "check_bounds",
    "seed_box",
    "has_count_law",
]

RESIDUAL_TOL = 1e-10
NEWTON_TOL = 1e-12
DEDUP_TOL = 1e-6
MAX_ITER = 200
MAX_HALVINGS = 40
STALL_WINDOW = 20


class Branch(enum.Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


def classify(z1: float, z2: float) -> Branch:
    return Branch.SYMMETRIC if abs(z1 - z2) <= 1e-8 * (1.0 + abs(z1)) else Branch.ASYMMETRIC


@dataclass(frozen=True)
class Solution:
    z: Field
    branch: Branch
    residual_norm: float
    multiplicity_note: Optional[str] = None


@dataclass(frozen=True)
class SolutionSet:
    graph: FertileGraph
    params: ModelParams
    solutions: tuple[Solution, ...]
    empirical: bool = False  # no proven count law for this (graph, k)

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def params_tuple(self):
        return (self.graph, self.params)

    def z1_values(self) -> list[float]:
        return sorted(s.z.z1 for s in self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


def has_count_law(g: FertileGraph, k: int) -> bool:
    g = FertileGraph.parse(g)
    if g in (FertileGraph.KEY, FertileGraph.WHISTLE):
        return True
    return k in (2, 3)


def _max_residual(g, k, lam, z) -> float:
    zz = np.asarray(z, dtype=float)
    return float(np.max(np.abs(zz - map_batch(g, k, lam, zz))))


# --- symmetric branch ------------------------------------------------------


def solve_symmetric(g: FertileGraph, p: ModelParams) -> Solution:
    """The unique solution with ``z1 = z2`` for Loop or Rod.

    Loop solves ``z = lam ((1+z)/(1+2z))^k`` on ``[1e-12, lam + 1]``; Rod
    solves ``z = lam ((1+z)/(2z))^k``. In the Rod case the right side exceeds
    ``lam`` exactly when ``z < 1``, so the root lies between ``lam`` and 1.
    """
    g = FertileGraph.parse(g)
    k, lam = p.k, p.lam
    if g is FertileGraph.LOOP:

        def f(z):
            return z - lam * ((1.0 + z) / (1.0 + 2.0 * z)) ** k

        lo, hi = 1e-12, lam + 1.0
    elif g is FertileGraph.ROD:

        def f(z):
            return z - lam * ((1.0 + z) / (2.0 * z)) ** k

        lo, hi = 0.5 * min(lam, 1.0), 2.0 * max(lam, 1.0)
    else:
        raise UnsupportedCase(f"no symmetric branch for graph={g.value}")
    if not (f(lo) < 0 < f(hi)):
        raise BracketFailure(f"symmetric equation has no sign change on [{lo}, {hi}]")
    z = bisect(f, lo, hi)
    res = _max_residual(g, k, lam, (z, z))
    return Solution(Field(z, z), Branch.SYMMETRIC, res)


# --- bounds ----------------------------------------------------------------


def seed_box(g: FertileGraph, p: ModelParams) -> tuple[float, float]:
    """Interval ``[lo, hi]`` that contains every coordinate of every fixed point
    (Loop, Rod), or a generous guess at it (Key, Whistle)."""
    g = FertileGraph.parse(g)
    k, lam = p.k, p.lam
    if g is FertileGraph.LOOP:
        return lam / (1.0 + lam) ** k, lam
    if g is FertileGraph.ROD:
        hi = max((1.0 + lam) ** k / lam ** (k - 1), lam, 1.0)
        return lam / (lam + hi) ** k, hi
    return lam / (1.0 + lam) ** k / 10.0, 10.0 * lam


def check_bounds(g: FertileGraph, p: ModelParams, s: Solution, margin: float = 0.0) -> bool:
    """A-priori bounds every fixed point must obey.

    Loop: ``lam/(1+lam)^k < z_i < lam``. Rod with ``z1, z2 < 1``:
    ``lam < z_i < (1+lam)^k / (2^k lam^(k-1))``; Rod with one coordinate
    below 1 and one above: ``min < lam < max < (1+lam)^k / lam^(k-1)``.
    Rod fields with a coordinate at 1 or both above 1, and Key/Whistle, have
    no stated bound and pass. Strict inequalities must hold by ``margin``.
    """
    g = FertileGraph.parse(g)
    k, lam = p.k, p.lam
    z1, z2 = s.z
    if g is FertileGraph.LOOP:
        lo = lam / (1.0 + lam) ** k
        return all(lo + margin < z < lam - margin for z in (z1, z2))
    if g is FertileGraph.ROD:
        eps = 1e-9
        below = [z < 1.0 - eps for z in (z1, z2)]
        above = [z > 1.0 + eps for z in (z1, z2)]
        if all(below):
            hi = (1.0 + lam) ** k / (2.0**k * lam ** (k - 1))
            return all(lam + margin < z < hi - margin for z in (z1, z2))
        if (below[0] and above[1]) or (below[1] and above[0]):
            lo_z, hi_z = min(z1, z2), max(z1, z2)
            cap = (1.0 + lam) ** k / lam ** (k - 1)
            return lo_z + margin < lam < hi_z - margin and hi_z < cap - margin and lo_z > margin
        return True
    return True


# --- multistart Newton on the full system ----------------------------------


def _log_residual(g, k, lam, U):
    """``u - log F(e^u)``: the fixed-point residual in log coordinates."""
    return U - np.log(map_batch(g, k, lam, np.exp(U)))


def _log_jacobian(g, k, lam, U):
    Z = np.exp(U)
    F = map_batch(g, k, lam, Z)
    JF = jacobian_batch(g, k, lam, Z)
    return np.eye(2) - JF * Z[..., None, :] / F[..., :, None]


def _solve2(J, b):
    det = J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]
    x0 = (J[..., 1, 1] * b[..., 0] - J[..., 0, 1] * b[..., 1]) / det
    x1 = (J[..., 0, 0] * b[..., 1] - J[..., 1, 0] * b[..., 0]) / det
    return np.stack([x0, x1], axis=-1)


def _damped_newton(fun, jac, U0: np.ndarray, tol_step: float = 1e-15, min_alpha: float = 2.0**-12):
    """Vectorised damped Newton on arrays of shape (m, 2).

    Each iteration halves the step (up to MAX_HALVINGS times) until the
    max-norm of ``fun`` decreases. A seed stops when its step is negligible,
    its line search fails, its residual is exactly zero, or it only
    progresses by steps shorter than ``min_alpha`` (a stalled seed near a
    singular Jacobian; other seeds cover that region), or fails to halve its
    residual over STALL_WINDOW iterations.
    """
    U = np.array(U0, dtype=float)
    active = np.ones(len(U), dtype=bool)
    with np.errstate(all="ignore"):
        G = fun(U)
        norm = np.max(np.abs(G), axis=-1)
        active &= np.isfinite(norm)
        checkpoint = norm.copy()
        for it in range(1, MAX_ITER + 1):
            idx = np.flatnonzero(active & (norm > 0))
            if idx.size == 0:
                break
            step = -_solve2(jac(U[idx]), G[idx])
            ok = np.all(np.isfinite(step), axis=-1)
            alpha = np.ones(idx.size)
            accepted = np.zeros(idx.size, dtype=bool)
            newU = U[idx].copy()
            newG = G[idx].copy()
            for _h in range(MAX_HALVINGS):
                todo = np.flatnonzero(ok & ~accepted)
                if todo.size == 0:
                    break
                trial = U[idx[todo]] + alpha[todo, None] * step[todo]
                Gt = fun(trial)
                better = np.max(np.abs(Gt), axis=-1) < norm[idx[todo]]
                acc = todo[better]
                newU[acc] = trial[better]
                newG[acc] = Gt[better]
                accepted[acc] = True
                alpha[todo[~better]] *= 0.5
            moved = idx[accepted]
            stepsize = np.max(np.abs(newU[accepted] - U[moved]), axis=-1)
            U[moved] = newU[accepted]
            G[moved] = newG[accepted]
            norm[moved] = np.max(np.abs(G[moved]), axis=-1)
            active[idx[~accepted]] = False
            done = (stepsize <= tol_step * (1.0 + np.max(np.abs(U[moved]), axis=-1))) | (alpha[accepted] < min_alpha)
            active[moved[done]] = False
            if it % STALL_WINDOW == 0:
                active &= norm < 0.5 * checkpoint
                checkpoint = norm.copy()
    return U


def _grid_seeds(lo: float, hi: float, n: int) -> np.ndarray:
    ax = np.logspace(math.log10(lo), math.log10(hi), n)
    a, b = np.meshgrid(ax, ax, indexing="ij")
    return np.log(np.stack([a.ravel(), b.ravel()], axis=-1))


def _dedup(fields, tol=DEDUP_TOL):
    reps: list[np.ndarray] = []
    for z in fields:
        if all(np.max(np.abs(z - r)) > tol for r in reps):
            reps.append(z)
    return reps


def multistart_newton(g: FertileGraph, p: ModelParams, n_grid: int = 32) -> list[Field]:
    """Fixed points reached by damped Newton from an ``n_grid x n_grid`` log grid.

    Newton runs in log coordinates ``u = log z`` on ``u - log F(e^u)``, which
    keeps iterates positive. Converged points (residual of ``z - F(z)`` below
    RESIDUAL_TOL) are merged at DEDUP_TOL and, for Loop and Rod, asymmetric
    ones are confirmed on the deflated system. Seeds run in a fixed order so
    the result is reproducible.
    """
    g = FertileGraph.parse(g)
    k, lam = p.k, p.lam
    lo, hi = seed_box(g, p)
    U = _damped_newton(
        lambda V: _log_residual(g, k, lam, V),
        lambda V: _log_jacobian(g, k, lam, V),
        _grid_seeds(lo, hi, n_grid),
    )
    with np.errstate(all="ignore"):
        Z = np.exp(U)
        R = np.max(np.abs(Z - map_batch(g, k, lam, Z)), axis=-1)
    good = Z[np.isfinite(R) & (R <= RESIDUAL_TOL)]
    cands = _dedup(good)
    if g.swap_symmetric:
        cands = _confirm_asymmetric(g, k, lam, cands)
    return [Field(float(z[0]), float(z[1])) for z in sorted(cands, key=lambda v: (v[0], v[1]))]


# --- deflated system for Loop / Rod ----------------------------------------


def _deflated_system(g, k, lam, Z):
    """``(z1 - F1, 1 - (F1 - F2)/(z1 - z2))`` with the quotient expanded.

    For a swap-symmetric graph ``N1 - N2 = (a11 - a12)(z1 - z2)``, so
    ``(F1 - F2)/(z1 - z2) = lam c / D * sum_j r1^j r2^(k-1-j)`` where
    ``r_i = N_i / D`` and ``c = a11 - a12``.
    """
    a = g.adjacency
    z1, z2 = Z[..., 0], Z[..., 1]
    D = a[0, 0] + a[0, 1] * z1 + a[0, 2] * z2
    N1 = a[1, 0] + a[1, 1] * z1 + a[1, 2] * z2
    N2 = a[2, 0] + a[2, 1] * z1 + a[2, 2] * z2
    r1, r2 = N1 / D, N2 / D
    c = a[1, 1] - a[1, 2]
    S = np.zeros_like(z1)
    dS1 = np.zeros_like(z1)
    dS2 = np.zeros_like(z1)
    for j in range(k):
        S = S + r1**j * r2 ** (k - 1 - j)
        if j:
            dS1 = dS1 + j * r1 ** (j - 1) * r2 ** (k - 1 - j)
        if k - 1 - j:
            dS2 = dS2 + (k - 1 - j) * r1**j * r2 ** (k - 2 - j)
    H = np.stack([z1 - lam * r1**k, 1.0 - lam * c * S / D], axis=-1)

    J = np.empty(Z.shape[:-1] + (2, 2))
    for col, jj in enumerate((1, 2)):
        dr1 = (a[1, jj] * D - N1 * a[0, jj]) / D**2
        dr2 = (a[2, jj] * D - N2 * a[0, jj]) / D**2
        J[..., 0, col] = (1.0 if col == 0 else 0.0) - lam * k * r1 ** (k - 1) * dr1
        dD = a[0, jj]
        J[..., 1, col] = -lam * c * ((dS1 * dr1 + dS2 * dr2) / D - S * dD / D**2)
    return H, J


def _deflated_refine(g, k, lam, z: np.ndarray) -> Optional[np.ndarray]:
    U = _damped_newton(
        lambda V: _deflated_system(g, k, lam, V)[0],
        lambda V: _deflated_system(g, k, lam, V)[1],
        z[None, :],
    )[0]
    with np.errstate(all="ignore"):
        H, _ = _deflated_system(g, k, lam, U[None, :])
    if not np.all(np.isfinite(U)) or np.any(U <= 0) or np.max(np.abs(H)) > NEWTON_TOL:
        return None
    return U


def _confirm_asymmetric(g, k, lam, cands):
    out = []
    for z in cands:
        if classify(*z) is Branch.SYMMETRIC:
            out.append(z)
            continue
        r = _deflated_refine(g, k, lam, z)
        if r is not None and _max_residual(g, k, lam, r) <= RESIDUAL_TOL:
            out.append(r)
    return _dedup(out)


# --- closed forms ----------------------------------------------------------


def closed_form_candidates(g: FertileGraph, p: ModelParams) -> list[Field]:
    """Asymmetric-branch fields from the k = 3 closed forms, swap-completed.

    Loop uses the octic in ``x``; Rod solves ``phi_rod_k3(x) = lam**(1/3)``
    directly. Points where the branch touches the diagonal come back too and
    are merged with the symmetric solution by the caller.
    """
    g = FertileGraph.parse(g)
    if p.k != 3 or g not in (FertileGraph.LOOP, FertileGraph.ROD):
        raise UnsupportedCase(f"no closed form for graph={g.value}, k={p.k}")
    bm = branch_map(g, 3)
    xs = loop_k3_branch_polynomial(p.lam) if g is FertileGraph.LOOP else branch_roots(bm, p.lam)
    out = []
    for x in xs:
        z1, z2 = bm.field(x)
        out.extend([Field(z1, z2), Field(z2, z1)])
    return out


# --- everything ------------------------------------------------------------


def solve_all(g: FertileGraph, p: ModelParams, n_grid: int = 32) -> SolutionSet:
    """All translation-invariant fixed points at ``(g, p)``.

    Raises
    ------
    ConvergenceFailure
        If a closed-form branch root cannot be polished to RESIDUAL_TOL.
    """
    g = FertileGraph.parse(g)
    k, lam = p.k, p.lam
    sols: list[Solution] = []

    def add(z: np.ndarray, note=None):
        for i, s in enumerate(sols):
            if np.max(np.abs(z - np.asarray(s.z))) <= DEDUP_TOL:
                if note and not s.multiplicity_note:
                    sols[i] = Solution(s.z, s.branch, s.residual_norm, note)
                return
        z1, z2 = float(z[0]), float(z[1])
        sols.append(Solution(Field(z1, z2), classify(z1, z2), _max_residual(g, k, lam, z), note))

    sym = None
    if g.swap_symmetric:
        sym = solve_symmetric(g, p)
        sols.append(sym)

    def near_sym(z):
        return sym is not None and np.max(np.abs(z - np.asarray(sym.z))) <= DEDUP_TOL

    if k == 3 and g.swap_symmetric:
        for f in closed_form_candidates(g, p):
            z = np.asarray(f)
            if near_sym(z):
                add(z, "near-tangent")
                continue
            r = _deflated_refine(g, k, lam, z)
            if r is None or _max_residual(g, k, lam, r) > RESIDUAL_TOL:
                raise ConvergenceFailure(f"closed-form branch root {tuple(f)} failed to polish")
            add(r, "near-tangent" if near_sym(r) else None)

    for f in multistart_newton(g, p, n_grid):
        z = np.asarray(f)
        tangent = near_sym(z) and np.max(np.abs(z - np.asarray(sym.z))) > 1e-9
        add(z, "near-tangent" if tangent else None)

    sols.sort(key=lambda s: (s.z.z1, s.z.z2))
    return SolutionSet(g, p, tuple(sols), empirical=not has_count_law(g, k))
