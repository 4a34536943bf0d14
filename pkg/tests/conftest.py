import random

import pytest

from bijumble.graphs import Graph, pair_on


@pytest.fixture
def rnd():
    return random.Random(0xC0FFEE)


def random_pair(rnd, m, n, q):
    """Random bipartite pair with left 0..m-1, right m..m+n-1."""
    edges = [(u, m + w) for u in range(m) for w in range(n) if rnd.random() < q]
    return pair_on(Graph.from_edges(m + n, edges), range(m), range(m, m + n))


def bipartite_from_mask(m, n, mask):
    """Pair whose m*n biadjacency bits come from ``mask`` (row-major)."""
    edges = [
        (u, m + w) for u in range(m) for w in range(n) if mask & (1 << (u * n + w))
    ]
    return pair_on(Graph.from_edges(m + n, edges), range(m), range(m, m + n))
