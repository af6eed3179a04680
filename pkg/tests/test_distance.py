import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topograph.cubical import PersistenceDiagram, PersistencePair
from topograph.distance import wasserstein1

P = PersistencePair


def diagram(points, dim=0):
    return PersistenceDiagram.from_pairs([P(dim, b, d) for b, d in points])


def brute_w1(a, b):
    """Enumerate every bijection of a + diag(b) onto b + diag(a)."""
    n, m = len(a), len(b)
    left = [("pt", p) for p in a] + [("diag", q) for q in b]
    right = [("pt", q) for q in b] + [("diag", p) for p in a]

    def cost(x, y):
        if x[0] == "pt" and y[0] == "pt":
            return max(abs(x[1][0] - y[1][0]), abs(x[1][1] - y[1][1]))
        if x[0] == "pt":
            return (x[1][0] - x[1][1]) / 2 if y[1] is x[1] else np.inf
        if y[0] == "pt":
            return (y[1][0] - y[1][1]) / 2 if x[1] is y[1] else np.inf
        return 0.0

    best = np.inf
    for perm in itertools.permutations(range(n + m)):
        best = min(best, sum(cost(left[i], right[perm[i]]) for i in range(n + m)))
    return best


def test_identical_is_zero():
    d = diagram([(1, 0), (0.7, 0.2)])
    assert wasserstein1(d, d, 0) == 0.0


def test_against_empty():
    assert wasserstein1(diagram([(1, 0)]), PersistenceDiagram.empty(), 0) == 0.5


def test_direct_match():
    assert wasserstein1(diagram([(1, 0)]), diagram([(0.9, 0)]), 0) == pytest.approx(0.1, abs=1e-15)


def test_dimension_filter():
    a = diagram([(1, 0)], dim=1)
    assert wasserstein1(a, PersistenceDiagram.empty(), 0) == 0.0
    assert wasserstein1(a, PersistenceDiagram.empty(), 1) == 0.5


def test_size_guard():
    big = diagram([(1, 0)] * 65)
    with pytest.raises(ValueError, match="limit"):
        wasserstein1(big, big, 0)


point = st.tuples(st.floats(0, 1), st.floats(0, 1)).map(lambda t: (max(t), min(t)))


@settings(max_examples=150, deadline=None)
@given(st.lists(point, max_size=3), st.lists(point, max_size=3))
def test_matches_brute_force(a, b):
    expected = brute_w1(a, b)
    assert wasserstein1(diagram(a), diagram(b), 0) == pytest.approx(expected, abs=1e-12)
