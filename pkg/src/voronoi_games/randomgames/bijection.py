"""Containment-preserving bijection between k-subsets and (n-k)-subsets.

For 0 < 2k <= n the bipartite graph joining A to every (n-k)-superset is
regular on both sides, so it has a perfect matching; scipy finds one.
"""

import itertools
from math import comb

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from voronoi_games.errors import PreconditionError

Subset = frozenset[int]


def monotone_bijection(n: int, k: int) -> dict[Subset, Subset]:
    """φ with A ⊂ φ(A) for every k-subset A of {1..n}."""
    if not 0 < 2 * k <= n:
        raise PreconditionError(f"need 0 < 2k <= n, got n={n}, k={k}")
    small = [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]
    large = [frozenset(c) for c in itertools.combinations(range(1, n + 1), n - k)]
    index = {subset: j for j, subset in enumerate(large)}

    rows, cols = [], []
    for i, subset in enumerate(small):
        rest = sorted(set(range(1, n + 1)) - subset)
        for extra in itertools.combinations(rest, n - 2 * k):
            rows.append(i)
            cols.append(index[subset | frozenset(extra)])
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(small), len(large)))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if (match < 0).any():
        raise PreconditionError(f"no perfect matching for n={n}, k={k}")
    return {subset: large[int(j)] for subset, j in zip(small, match)}


def is_monotone_bijection(mapping: dict[Subset, Subset], n: int, k: int) -> bool:
    if len(mapping) != comb(n, k) or len(set(mapping.values())) != len(mapping):
        return False
    return all(len(a) == k and len(b) == n - k and a <= b for a, b in mapping.items())
