"""The four fertile three-state constraint graphs.

States are labelled 0 (vacant), 1 and 2 (occupied). A graph lists which
pairs of states may sit on neighbouring vertices of a tree.
"""

from __future__ import annotations

import enum
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "State",
    "FertileGraph",
    "adjacency_matrix",
    "is_admissible_pair",
    "is_admissible_configuration",
]


class State(enum.IntEnum):
    VACANT = 0
    OCCUPIED_1 = 1
    OCCUPIED_2 = 2


_EDGES = {
    "loop": ((0, 0), (0, 1), (0, 2), (1, 1), (2, 2)),
    "rod": ((0, 1), (0, 2), (1, 1), (2, 2)),
    "key": ((0, 0), (0, 1), (0, 2), (1, 1)),
    "whistle": ((0, 0), (0, 1), (1, 2)),
}


def _build(edges) -> np.ndarray:
    a = np.zeros((3, 3), dtype=np.int64)
    for i, j in edges:
        a[i, j] = a[j, i] = 1
    a.setflags(write=False)
    return a


_ADJ = {name: _build(edges) for name, edges in _EDGES.items()}


class FertileGraph(enum.Enum):
    """One of the four fertile graphs; the enum is closed on purpose."""

    LOOP = "loop"
    ROD = "rod"
    KEY = "key"
    WHISTLE = "whistle"

    @property
    def kind(self) -> str:
        return self.value

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only 3x3 0/1 matrix ``a[i, j]``."""
        return _ADJ[self.value]

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return _EDGES[self.value]

    @property
    def swap_symmetric(self) -> bool:
        """True when exchanging states 1 and 2 is a graph automorphism."""
        a = self.adjacency
        return bool(np.array_equal(a, a[[0, 2, 1]][:, [0, 2, 1]]))

    @classmethod
    def parse(cls, name: "str | FertileGraph") -> "FertileGraph":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown graph {name!r}; expected one of {valid}") from None

    def __str__(self) -> str:
        return self.value


def adjacency_matrix(kind: "str | FertileGraph") -> np.ndarray:
    """Return a fresh (writable) copy of the adjacency matrix for ``kind``."""
    return FertileGraph.parse(kind).adjacency.copy()


def _check_state(s) -> int:
    s = int(s)
    if s not in (0, 1, 2):
        raise ValueError(f"state must be 0, 1 or 2, got {s}")
    return s


def is_admissible_pair(g: FertileGraph, s: int, t: int) -> bool:
    return bool(FertileGraph.parse(g).adjacency[_check_state(s), _check_state(t)])


def is_admissible_configuration(g: FertileGraph, tree, sigma: "Sequence[int] | Mapping[int, int]") -> bool:
    """Check every edge of ``tree`` against ``g``.

    ``tree`` is anything with an ``edges()`` method yielding vertex pairs
    (see :class:`hardcore_tree.oracle.FiniteTree`). ``sigma`` maps vertex
    index to state.
    """
    a = FertileGraph.parse(g).adjacency
    if isinstance(sigma, Mapping):
        missing = [v for v in range(tree.n_vertices) if v not in sigma]
        if missing:
            raise ValueError(f"sigma has no state for vertices {missing}")
        states = [_check_state(sigma[v]) for v in range(tree.n_vertices)]
    else:
        if len(sigma) != tree.n_vertices:
            raise ValueError(f"sigma has {len(sigma)} entries for {tree.n_vertices} vertices")
        states = [_check_state(s) for s in sigma]
    return all(a[states[x], states[y]] for x, y in tree.edges())
