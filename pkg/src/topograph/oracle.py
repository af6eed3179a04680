"""Reference persistence by standard boundary-matrix reduction over Z/2.

Slow and dense on purpose: it shares no code with the union-find sweeps and
serves as ground truth for them.
"""

from __future__ import annotations

import numpy as np

from .cubical import CubicalComplex, PersistenceDiagram, PersistencePair

MAX_CELLS = 10_000


class ComplexTooLarge(ValueError):
    pass


def _cells(c: CubicalComplex):
    """Yield ``(value, dim, index, boundary)`` with boundaries as cell keys."""
    h, w = c.shape
    g = c.vertices
    for r in range(h):
        for col in range(w):
            yield float(g[r, col]), 0, r * w + col, ()
    n_h = h * (w - 1)
    for r in range(h):
        for col in range(w - 1):
            yield float(c.h_edges[r, col]), 1, r * (w - 1) + col, ((0, r * w + col), (0, r * w + col + 1))
    for r in range(h - 1):
        for col in range(w):
            yield float(c.v_edges[r, col]), 1, n_h + r * w + col, ((0, r * w + col), (0, (r + 1) * w + col))
    for r in range(h - 1):
        for col in range(w - 1):
            top = r * (w - 1) + col
            bottom = (r + 1) * (w - 1) + col
            left = n_h + r * w + col
            right = n_h + r * w + col + 1
            yield float(c.squares[r, col]), 2, r * (w - 1) + col, ((1, top), (1, bottom), (1, left), (1, right))


def oracle_diagram(c: CubicalComplex) -> PersistenceDiagram:
    if sum(c.counts) > MAX_CELLS:
        raise ComplexTooLarge(f"complex has {sum(c.counts)} cells; oracle limit is {MAX_CELLS}")

    cells = sorted(_cells(c), key=lambda t: (-t[0], t[1], t[2]))
    position = {(dim, idx): k for k, (_, dim, idx, _) in enumerate(cells)}

    # columns as int bitsets over filtration positions
    reduced: dict[int, int] = {}
    pivot_owner: dict[int, int] = {}
    low_of: dict[int, int] = {}
    for j, (_, _, _, boundary) in enumerate(cells):
        col = 0
        for face in boundary:
            col |= 1 << position[face]
        while col:
            low = col.bit_length() - 1
            other = pivot_owner.get(low)
            if other is None:
                pivot_owner[low] = j
                low_of[j] = low
                break
            col ^= reduced[other]
        reduced[j] = col

    g_min = float(c.vertices.min())
    pairs = []
    killed = set(pivot_owner)
    for j, i in low_of.items():
        birth, dim = cells[i][0], cells[i][1]
        death = cells[j][0]
        if birth > death:
            pairs.append(PersistencePair(dim, birth, death))
    for k, (value, dim, _, _) in enumerate(cells):
        if k in killed or k in low_of:
            continue
        # unpaired positive cell
        if dim == 0:
            pairs.append(PersistencePair(0, value, g_min, True))
        else:
            pairs.append(PersistencePair(dim, value, -np.inf, True))
    return PersistenceDiagram.from_pairs(pairs)
