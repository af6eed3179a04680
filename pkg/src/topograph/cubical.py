"""Cubical persistence of 2-D grids under the super-level set filtration.

Pixels are vertices (V-construction), 4-neighbours share an edge, and each
unit square of four pixels is a 2-cell. Every cell takes the minimum of its
vertex values, so sweeping the threshold downward adds a cell only after its
faces. Dimension 0 is computed by union-find over pixels; dimension 1 by
union-find over the dual graph of squares.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from . import _kernels


class PersistencePair(NamedTuple):
    dim: int
    birth: float
    death: float
    essential: bool = False

    @property
    def persistence(self) -> float:
        return self.birth - self.death


@dataclass(frozen=True)
class CubicalComplex:
    """Cell values of the V-construction complex on an ``H x W`` grid.

    Edges are indexed horizontal-first (``H*(W-1)`` of them, row-major) and
    then vertical (``(H-1)*W``, row-major).
    """

    vertices: np.ndarray
    h_edges: np.ndarray
    v_edges: np.ndarray
    squares: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.vertices.shape

    @property
    def edges(self) -> np.ndarray:
        return np.concatenate([self.h_edges.ravel(), self.v_edges.ravel()])

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.vertices.size, self.h_edges.size + self.v_edges.size, self.squares.size

    def cells_at(self, tau: float) -> tuple[int, int, int]:
        """Number of vertices, edges and squares with value >= ``tau``."""
        return (
            int(np.count_nonzero(self.vertices >= tau)),
            int(np.count_nonzero(self.h_edges >= tau) + np.count_nonzero(self.v_edges >= tau)),
            int(np.count_nonzero(self.squares >= tau)),
        )


@dataclass(frozen=True)
class PersistenceDiagram:
    """Parallel arrays, one entry per pair."""

    dim: np.ndarray
    birth: np.ndarray
    death: np.ndarray
    essential: np.ndarray

    @classmethod
    def from_pairs(cls, pairs) -> "PersistenceDiagram":
        pairs = list(pairs)
        return cls(
            dim=np.array([p.dim for p in pairs], dtype=np.int64),
            birth=np.array([p.birth for p in pairs], dtype=np.float64),
            death=np.array([p.death for p in pairs], dtype=np.float64),
            essential=np.array([p.essential for p in pairs], dtype=bool),
        )

    @classmethod
    def empty(cls) -> "PersistenceDiagram":
        return cls.from_pairs([])

    def __len__(self) -> int:
        return len(self.dim)

    def __iter__(self) -> Iterator[PersistencePair]:
        for k in range(len(self.dim)):
            yield PersistencePair(
                int(self.dim[k]), float(self.birth[k]), float(self.death[k]), bool(self.essential[k])
            )

    def select(self, dim: int) -> "PersistenceDiagram":
        m = self.dim == dim
        return PersistenceDiagram(self.dim[m], self.birth[m], self.death[m], self.essential[m])

    def union(self, other: "PersistenceDiagram") -> "PersistenceDiagram":
        return PersistenceDiagram(
            np.concatenate([self.dim, other.dim]),
            np.concatenate([self.birth, other.birth]),
            np.concatenate([self.death, other.death]),
            np.concatenate([self.essential, other.essential]),
        )

    def multiset(self) -> Counter:
        return Counter(self)

    def sorted_pairs(self) -> list[PersistencePair]:
        return sorted(self, key=lambda p: (p.dim, -p.birth, -p.death, not p.essential))

    def dump(self) -> str:
        """Text form: one ``dim birth death essential_flag`` line per pair."""
        lines = [
            f"{p.dim} {p.birth!r} {p.death!r} {int(p.essential)}" for p in self.sorted_pairs()
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def parse(cls, text: str) -> "PersistenceDiagram":
        pairs = []
        for line in text.splitlines():
            if not line.strip():
                continue
            d, b, de, e = line.split()
            pairs.append(PersistencePair(int(d), float(b), float(de), e == "1"))
        return cls.from_pairs(pairs)


def _as_grid(g) -> np.ndarray:
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D grid, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("grid contains non-finite values")
    return g


def build_complex(g) -> CubicalComplex:
    g = _as_grid(g)
    h_edges = np.minimum(g[:, :-1], g[:, 1:])
    v_edges = np.minimum(g[:-1, :], g[1:, :])
    squares = np.minimum(np.minimum(g[:-1, :-1], g[:-1, 1:]), np.minimum(g[1:, :-1], g[1:, 1:]))
    return CubicalComplex(g.copy(), h_edges, v_edges, squares)


def persistence_h0(c: CubicalComplex) -> list[PersistencePair]:
    g = c.vertices
    h, w = g.shape
    flat = np.ascontiguousarray(g.ravel())
    order = np.argsort(-flat, kind="stable")
    births, deaths, n = _kernels.h0_sweep(flat, order, h, w)
    pairs = [PersistencePair(0, float(births[k]), float(deaths[k])) for k in range(n)]
    pairs.append(PersistencePair(0, float(flat.max()), float(flat.min()), True))
    return pairs


def persistence_h1(c: CubicalComplex) -> list[PersistencePair]:
    g = c.vertices
    h, w = g.shape
    births, deaths, n = _kernels.h1_dual_sweep(np.ascontiguousarray(g.ravel()), h, w)
    return [PersistencePair(1, float(births[k]), float(deaths[k])) for k in range(n)]


def compute_diagram(g) -> PersistenceDiagram:
    """Persistence diagram (dims 0 and 1) of a grid's super-level filtration.

    Zero-persistence finite pairs are dropped. The single essential class is
    reported as ``(max, min)`` so every coordinate stays finite.
    """
    c = build_complex(g)
    return PersistenceDiagram.from_pairs(persistence_h0(c) + persistence_h1(c))


def betti_at(d: PersistenceDiagram, tau: float) -> tuple[int, int]:
    """Betti numbers of the super-level complex at threshold ``tau``."""
    # the essential class never dies: below the grid minimum the complex is the full grid
    alive = (d.birth >= tau) & (d.essential | (tau > d.death))
    return int(np.count_nonzero(alive & (d.dim == 0))), int(np.count_nonzero(alive & (d.dim == 1)))


def euler_at(c: CubicalComplex, tau: float) -> int:
    v, e, f = c.cells_at(tau)
    return v - e + f
