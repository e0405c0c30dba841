"""Translation-invariant boundary-law recursion.

For a fertile graph with adjacency ``a`` and a field ``z = (z1, z2)``
(with ``z0 = 1``), the map is

    F_i(z) = lam * (N_i / D)**k,   N_i = a_i0 + a_i1 z1 + a_i2 z2,
                                   D   = a_00 + a_01 z1 + a_02 z2,

for ``i = 1, 2``. Fixed points correspond one-to-one to translation-invariant
Gibbs measures. Every function here works from the adjacency matrix; there
are no per-graph formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NonFiniteInput
from .graphs import FertileGraph

__all__ = [
    "ModelParams",
    "Field",
    "recursion_map",
    "residual",
    "jacobian",
    "map_batch",
    "jacobian_batch",
]


@dataclass(frozen=True)
class ModelParams:
    """Tree order ``k`` (children per non-root vertex) and activity ``lam``."""

    k: int
    lam: float

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        lam = float(self.lam)
        if not math.isfinite(lam) or lam <= 0:
            raise ValueError(f"lambda must be positive and finite, got {self.lam!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "lam", lam)


class Field(NamedTuple):
    z1: float
    z2: float

    def swapped(self) -> "Field":
        return Field(self.z2, self.z1)


def _as_field(z) -> np.ndarray:
    arr = np.asarray(z, dtype=float)
    if arr.shape != (2,):
        raise NonFiniteInput(f"field must have two components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise NonFiniteInput(f"field entries must be finite and positive, got {tuple(arr)}")
    return arr


def _parts(a: np.ndarray, Z: np.ndarray):
    z1, z2 = Z[..., 0], Z[..., 1]
    D = a[0, 0] + a[0, 1] * z1 + a[0, 2] * z2
    N1 = a[1, 0] + a[1, 1] * z1 + a[1, 2] * z2
    N2 = a[2, 0] + a[2, 1] * z1 + a[2, 2] * z2
    return N1, N2, D


def map_batch(g: FertileGraph, k: int, lam: float, Z: np.ndarray) -> np.ndarray:
    """Vectorised map over an array of fields with trailing axis of length 2.

    No input validation; callers own that.
    """
    a = g.adjacency
    N1, N2, D = _parts(a, Z)
    # power of the ratio, not ratio of powers: avoids overflow for large k
    return lam * np.stack([(N1 / D) ** k, (N2 / D) ** k], axis=-1)


def jacobian_batch(g: FertileGraph, k: int, lam: float, Z: np.ndarray) -> np.ndarray:
    """d F_i / d z_j for an array of fields; result has trailing shape (2, 2)."""
    a = g.adjacency
    N1, N2, D = _parts(a, Z)
    out = np.empty(Z.shape[:-1] + (2, 2))
    for row, (i, N) in enumerate(((1, N1), (2, N2))):
        pref = k * lam * (N / D) ** (k - 1) / D**2
        for col, j in enumerate((1, 2)):
            out[..., row, col] = pref * (a[i, j] * D - N * a[0, j])
    return out


def recursion_map(g: FertileGraph, p: ModelParams, z) -> Field:
    """Apply the translation-invariant recursion once.

    Raises
    ------
    NonFiniteInput
        If ``z`` has a non-finite or non-positive entry.
    """
    zz = _as_field(z)
    F = map_batch(FertileGraph.parse(g), p.k, p.lam, zz)
    if not np.all(np.isfinite(F)):
        raise NonFiniteInput(f"map is not finite at {tuple(zz)}")
    return Field(float(F[0]), float(F[1]))


def residual(g: FertileGraph, p: ModelParams, z) -> np.ndarray:
    """``z - recursion_map(g, p, z)``; zero exactly at fixed points."""
    zz = _as_field(z)
    return zz - np.asarray(recursion_map(g, p, zz))


def jacobian(g: FertileGraph, p: ModelParams, z) -> np.ndarray:
    """Analytic 2x2 Jacobian of :func:`recursion_map` at ``z``."""
    zz = _as_field(z)
    return jacobian_batch(FertileGraph.parse(g), p.k, p.lam, zz)
