"""Union-find sweeps behind the fast persistence path.

All kernels take flat row-major arrays plus the grid shape and return
preallocated buffers with a fill count, which keeps them numba-friendly.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit


@njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def h0_sweep(values, order, height, width):
    """Super-level 0-dim pairs on a 4-connected pixel grid.

    ``order`` lists vertex indices by descending value (ties: index ascending).
    Adding a vertex also adds every edge to an already present neighbour, which
    is exactly when a V-construction edge enters. Zero-persistence merges are
    not reported.
    """
    n = height * width
    parent = np.arange(n)
    birth = np.empty(n)
    present = np.zeros(n, dtype=np.bool_)
    births = np.empty(n)
    deaths = np.empty(n)
    count = 0
    for k in range(n):
        v = order[k]
        present[v] = True
        birth[v] = values[v]
        level = values[v]
        r = v // width
        c = v - r * width
        for t in range(4):
            if t == 0:
                if r == 0:
                    continue
                u = v - width
            elif t == 1:
                if r == height - 1:
                    continue
                u = v + width
            elif t == 2:
                if c == 0:
                    continue
                u = v - 1
            else:
                if c == width - 1:
                    continue
                u = v + 1
            if not present[u]:
                continue
            ru = _find(parent, u)
            rv = _find(parent, v)
            if ru == rv:
                continue
            # elder rule: larger birth survives, ties go to the smaller root
            if birth[ru] > birth[rv] or (birth[ru] == birth[rv] and ru < rv):
                elder, younger = ru, rv
            else:
                elder, younger = rv, ru
            if birth[younger] > level:
                births[count] = birth[younger]
                deaths[count] = level
                count += 1
            parent[younger] = elder
    return births, deaths, count


@njit(cache=True, nogil=True)
def h1_dual_sweep(values, height, width):
    """Super-level 1-dim pairs via the dual graph of squares.

    Dual nodes are the unit squares plus one outside node; every primal edge
    is a dual edge between the two regions it separates. Sweeping edges by
    ascending value, each merge of two distinct dual components is a primal
    loop born at the edge value; it dies at the minimum square value of the
    younger dual component. The outside node sits at -inf and never dies.
    """
    n_sq_r = height - 1
    n_sq_c = width - 1
    births = np.empty(0)
    deaths = np.empty(0)
    if n_sq_r <= 0 or n_sq_c <= 0:
        return births, deaths, 0
    n_sq = n_sq_r * n_sq_c
    outside = n_sq
    sq_val = np.empty(n_sq + 1)
    for i in range(n_sq_r):
        for j in range(n_sq_c):
            a = values[i * width + j]
            b = values[i * width + j + 1]
            c = values[(i + 1) * width + j]
            d = values[(i + 1) * width + j + 1]
            sq_val[i * n_sq_c + j] = min(min(a, b), min(c, d))
    sq_val[outside] = -np.inf

    n_h = height * (width - 1)
    n_v = (height - 1) * width
    n_e = n_h + n_v
    e_val = np.empty(n_e)
    e_a = np.empty(n_e, dtype=np.int64)
    e_b = np.empty(n_e, dtype=np.int64)
    k = 0
    # horizontal edge (r, c)-(r, c+1) separates squares (r-1, c) and (r, c)
    for r in range(height):
        for c in range(width - 1):
            e_val[k] = min(values[r * width + c], values[r * width + c + 1])
            e_a[k] = (r - 1) * n_sq_c + c if r > 0 else outside
            e_b[k] = r * n_sq_c + c if r < height - 1 else outside
            k += 1
    # vertical edge (r, c)-(r+1, c) separates squares (r, c-1) and (r, c)
    for r in range(height - 1):
        for c in range(width):
            e_val[k] = min(values[r * width + c], values[(r + 1) * width + c])
            e_a[k] = r * n_sq_c + c - 1 if c > 0 else outside
            e_b[k] = r * n_sq_c + c if c < width - 1 else outside
            k += 1

    order = np.argsort(e_val, kind="mergesort")
    parent = np.arange(n_sq + 1)
    birth = sq_val.copy()
    births = np.empty(n_e)
    deaths = np.empty(n_e)
    count = 0
    for t in range(n_e):
        e = order[t]
        ra = _find(parent, e_a[e])
        rb = _find(parent, e_b[e])
        if ra == rb:
            continue
        # elder has the smaller minimum (entered first when sweeping upward)
        if birth[ra] < birth[rb] or (birth[ra] == birth[rb] and ra < rb):
            elder, younger = ra, rb
        else:
            elder, younger = rb, ra
        if e_val[e] > birth[younger]:
            births[count] = e_val[e]
            deaths[count] = birth[younger]
            count += 1
        parent[younger] = elder
    return births, deaths, count
