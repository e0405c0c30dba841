"""Brute-force consistency check on finite Cayley trees.

The finite-volume measure on ``V_n`` gives each admissible configuration
weight ``lam**(#occupied in V_n) * prod_{x in W_n} w[x, sigma(x)]``. A family
of such measures is consistent when summing the depth-``n`` measure over the
outermost level reproduces the depth-``n-1`` measure. With
``w = (1, z1/lam, z2/lam)`` this holds exactly when ``z`` is a fixed point of
the recursion, and the functions below check that by full enumeration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySupport, TooLarge
from .graphs import FertileGraph
from .recursion import Field, ModelParams, _as_field

__all__ = [
    "FiniteTree",
    "BoundaryWeights",
    "FiniteMeasure",
    "enumerate_admissible",
    "count_admissible",
    "partition_function",
    "measure",
    "consistency_defect",
]

NAIVE_LIMIT = 2**31
MAX_CONFIGURATIONS = 2**24


@dataclass(frozen=True)
class FiniteTree:
    """A rooted tree with vertices numbered in level order.

    ``parents[0] == -1`` is the root; every other vertex has a smaller-numbered
    parent and levels never decrease along the numbering, so ``V_m`` is always
    a prefix of the vertex list.
    """

    parents: tuple[int, ...]
    k: Optional[int] = None

    def __post_init__(self):
        ps = tuple(int(p) for p in self.parents)
        if not ps or ps[0] != -1:
            raise ValueError("vertex 0 must be the root (parent -1)")
        lev = [0]
        for v, p in enumerate(ps[1:], start=1):
            if not 0 <= p < v:
                raise ValueError(f"vertex {v} has parent {p}; parents must precede children")
            lev.append(lev[p] + 1)
            if lev[v] < lev[v - 1]:
                raise ValueError("vertices must be numbered in level order")
        object.__setattr__(self, "parents", ps)

    @classmethod
    def cayley(cls, k: int, depth: int) -> "FiniteTree":
        """``V_depth`` of the order-``k`` Cayley tree: the root has ``k + 1``
        children, every other non-boundary vertex ``k``."""
        if k < 1 or depth < 0:
            raise ValueError("need k >= 1 and depth >= 0")
        parents = [-1]
        frontier = [0]
        for d in range(depth):
            nxt = []
            for v in frontier:
                for _ in range(k + 1 if d == 0 else k):
                    parents.append(v)
                    nxt.append(len(parents) - 1)
            frontier = nxt
        return cls(tuple(parents), k)

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> "FiniteTree":
        return cls(tuple(parents))

    @cached_property
    def levels(self) -> np.ndarray:
        lev = np.zeros(len(self.parents), dtype=np.int64)
        for v in range(1, len(self.parents)):
            lev[v] = lev[self.parents[v]] + 1
        return lev

    @property
    def n_vertices(self) -> int:
        return len(self.parents)

    @property
    def depth(self) -> int:
        return int(self.levels[-1])

    def level(self, m: int) -> np.ndarray:
        """Indices of ``W_m``."""
        return np.flatnonzero(self.levels == m)

    def prefix_size(self, m: int) -> int:
        """``|V_m|``."""
        return int(np.count_nonzero(self.levels <= m))

    @property
    def boundary(self) -> np.ndarray:
        return self.level(self.depth)

    def children(self, v: int) -> list[int]:
        return [u for u, p in enumerate(self.parents) if p == v]

    def edges(self):
        for v, p in enumerate(self.parents):
            if p >= 0:
                yield (p, v)


@dataclass(frozen=True)
class BoundaryWeights:
    """Weights ``(w0, w1, w2)`` for each vertex of ``W_n``, rows in the order
    of ``tree.boundary``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("weights must have shape (|W_n|, 3)")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError("weights must be finite and positive")
        object.__setattr__(self, "values", v)

    @classmethod
    def translation_invariant(cls, g: FertileGraph, tree: FiniteTree, z, lam: float) -> "BoundaryWeights":
        """Every boundary vertex gets ``(1, z1/lam, z2/lam)``.

        When the boundary is the root itself (depth 0) the root's boundary law
        is built from its ``k + 1`` children, since the root is the one vertex
        where the translation-invariant value does not apply.
        """
        zz = _as_field(z)
        if tree.depth == 0 and tree.k is not None:
            a = FertileGraph.parse(g).adjacency
            zt = np.array([1.0, zz[0], zz[1]])
            D = a[0] @ zt
            zz = lam * np.array([(a[1] @ zt / D) ** (tree.k + 1), (a[2] @ zt / D) ** (tree.k + 1)])
        row = np.array([1.0, zz[0] / lam, zz[1] / lam])
        return cls(np.tile(row, (len(tree.boundary), 1)))

    @classmethod
    def uniform(cls, tree: FiniteTree) -> "BoundaryWeights":
        return cls(np.ones((len(tree.boundary), 3)))


@dataclass
class FiniteMeasure:
    tree: FiniteTree
    support: np.ndarray  # (m, |V_n|) int8, lexicographically sorted
    probabilities: np.ndarray
    partition_value: float
    log_partition: float

    def probability_of(self, sigma: Sequence[int]) -> float:
        hits = np.flatnonzero(np.all(self.support == np.asarray(sigma, dtype=np.int8), axis=1))
        return float(self.probabilities[hits[0]]) if hits.size else 0.0

    def to_json(self) -> str:
        rows = [
            {"sigma": "".join(map(str, cfg.tolist())), "probability": float(p)}
            for cfg, p in zip(self.support, self.probabilities)
        ]
        return json.dumps(
            {
                "n_vertices": self.tree.n_vertices,
                "depth": self.tree.depth,
                "partition_value": self.partition_value,
                "configurations": rows,
            },
            indent=1,
        )


def count_admissible(g: FertileGraph, tree: FiniteTree) -> int:
    """Number of admissible configurations by a leaves-up transfer recursion."""
    a = [[int(v) for v in row] for row in FertileGraph.parse(g).adjacency]
    sub = [[1, 1, 1] for _ in range(tree.n_vertices)]
    for v in range(tree.n_vertices - 1, 0, -1):
        p = tree.parents[v]
        for i in range(3):
            sub[p][i] *= sum(a[i][j] * sub[v][j] for j in range(3))
    return sum(sub[0])


def partition_function(g: FertileGraph, lam: float, tree: FiniteTree, w: BoundaryWeights) -> float:
    """``Z_n`` by the same transfer recursion, as a cross-check on enumeration."""
    a = FertileGraph.parse(g).adjacency.astype(float)
    act = np.array([1.0, lam, lam])
    sub = np.tile(act, (tree.n_vertices, 1))
    sub[tree.boundary] *= w.values
    for v in range(tree.n_vertices - 1, 0, -1):
        sub[tree.parents[v]] *= a @ sub[v]
    return float(sub[0].sum())


def enumerate_admissible(g: FertileGraph, tree: FiniteTree, max_configurations: int = MAX_CONFIGURATIONS) -> np.ndarray:
    """Every admissible assignment ``V -> {0, 1, 2}`` as rows of an int8 array.

    Configurations are grown vertex by vertex along the level order, each new
    vertex restricted to states compatible with its parent, and returned in
    lexicographic order.

    Raises
    ------
    TooLarge
        If ``3**|V|`` exceeds 2**31 or the admissible count exceeds
        ``max_configurations``.
    """
    g = FertileGraph.parse(g)
    n = tree.n_vertices
    if 3**n > NAIVE_LIMIT:
        raise TooLarge(f"3^{n} assignments exceeds the enumeration limit 2^31")
    total = count_admissible(g, tree)
    if total > max_configurations:
        raise TooLarge(f"{total} admissible configurations exceeds {max_configurations}")
    a = g.adjacency.astype(bool)
    cfg = np.arange(3, dtype=np.int8)[:, None]
    for v in range(1, n):
        par = cfg[:, tree.parents[v]]
        blocks = [np.column_stack([cfg[a[par, s]], np.full(int(a[par, s].sum()), s, dtype=np.int8)]) for s in range(3)]
        cfg = np.concatenate(blocks, axis=0)
    order = np.lexsort(cfg.T[::-1])
    return cfg[order]


def measure(g: FertileGraph, p: ModelParams, tree: FiniteTree, w: BoundaryWeights) -> FiniteMeasure:
    """The finite-volume measure on ``tree``; probabilities computed in log
    space with a max shift."""
    g = FertileGraph.parse(g)
    if w.values.shape[0] != len(tree.boundary):
        raise ValueError(f"{w.values.shape[0]} weight rows for {len(tree.boundary)} boundary vertices")
    support = enumerate_admissible(g, tree)
    if len(support) == 0:
        raise EmptySupport(f"no admissible configuration for {g.value}")
    occupied = np.count_nonzero(support >= 1, axis=1)
    logw = np.log(w.values)
    bnd = support[:, tree.boundary]
    logwt = occupied * math.log(p.lam) + logw[np.arange(len(tree.boundary)), bnd].sum(axis=1)
    shift = float(np.max(logwt))
    wt = np.exp(logwt - shift)
    s = float(np.sum(wt))
    log_z = shift + math.log(s)
    return FiniteMeasure(tree, support, wt / s, math.exp(log_z), log_z)


def _codes(cfg: np.ndarray) -> np.ndarray:
    return cfg.astype(np.int64) @ (3 ** np.arange(cfg.shape[1] - 1, -1, -1, dtype=np.int64))


def consistency_defect(g: FertileGraph, p: ModelParams, n: int, z) -> float:
    """``max |sum over W_n of mu_n - mu_{n-1}|`` over configurations on ``V_{n-1}``.

    Both measures use translation-invariant boundary weights built from
    ``z``. Summation runs in ascending configuration order, so the result is
    reproducible bit for bit.
    """
    if n < 1:
        raise ValueError("depth n must be >= 1")
    g = FertileGraph.parse(g)
    big = FiniteTree.cayley(p.k, n)
    small = FiniteTree.cayley(p.k, n - 1)
    mu_n = measure(g, p, big, BoundaryWeights.translation_invariant(g, big, z, p.lam))
    mu_m = measure(g, p, small, BoundaryWeights.translation_invariant(g, small, z, p.lam))
    prefix = mu_n.support[:, : small.n_vertices]
    small_codes = _codes(mu_m.support)
    idx = np.searchsorted(small_codes, _codes(prefix))
    if np.any(idx >= len(small_codes)) or np.any(small_codes[np.minimum(idx, len(small_codes) - 1)] != _codes(prefix)):
        raise AssertionError("restriction of an admissible configuration is not admissible")
    marginal = np.bincount(idx, weights=mu_n.probabilities, minlength=len(small_codes))
    return float(np.max(np.abs(marginal - mu_m.probabilities)))
