"""Brute-force reference implementations used to check the library.

Nothing here imports trimanifold's algorithms; inputs are plain facet lists.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

import numpy as np


def closure(facets):
    """All non-empty faces of the given facets, as frozensets."""
    out = set()
    for f in facets:
        for k in range(1, len(f) + 1):
            out.update(frozenset(c) for c in combinations(f, k))
    return out


def fvector(facets):
    faces = closure(facets)
    d = max(len(f) for f in faces) - 1
    return tuple(sum(1 for f in faces if len(f) == k + 1) for k in range(d + 1))


def _rank_mod2(M: np.ndarray) -> int:
    M = M.copy() % 2
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if M[i, c]), None)
        if pivot is None:
            continue
        M[[r, pivot]] = M[[pivot, r]]
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
        if r == rows:
            break
    return r


def betti_mod2(facets):
    """Betti numbers over GF(2) via dense Gaussian elimination."""
    faces = closure(facets)
    d = max(len(f) for f in faces) - 1
    by_dim = [sorted(tuple(sorted(f)) for f in faces if len(f) == k + 1) for k in range(d + 1)]
    ranks = [0] * (d + 2)
    for k in range(1, d + 1):
        index = {s: i for i, s in enumerate(by_dim[k - 1])}
        M = np.zeros((len(by_dim[k]), len(by_dim[k - 1])), dtype=np.uint8)
        for i, s in enumerate(by_dim[k]):
            for sub in combinations(s, k):
                M[i, index[sub]] = 1
        ranks[k] = _rank_mod2(M)
    return tuple(len(by_dim[k]) - ranks[k] - ranks[k + 1] for k in range(d + 1))


def orientable_by_double_cover(facets) -> bool:
    """A closed pseudomanifold is orientable iff its orientation double cover is disconnected.

    Nodes are (facet, ordering parity). Two oriented facets sharing a ridge
    are joined when they induce opposite orientations on it.
    """
    facets = [tuple(sorted(f)) for f in facets]
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    def induced(f, parity, ridge):
        # orientation of `ridge` induced by facet f oriented as (+1 = sorted order) * parity
        (missing,) = set(f) - set(ridge)
        order = [missing] + list(ridge)
        # sign of permutation taking sorted f to `order`
        perm = [f.index(v) for v in order]
        inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
        return parity * (-1) ** inv

    ridges = {}
    for f in facets:
        for r in combinations(f, len(f) - 1):
            ridges.setdefault(r, []).append(f)
    for r, owners in ridges.items():
        assert len(owners) == 2, "not a closed pseudomanifold"
        f, g = owners
        for p in (1, -1):
            for q in (1, -1):
                if induced(f, p, r) == -induced(g, q, r):
                    union((f, p), (g, q))
    return find((facets[0], 1)) != find((facets[0], -1))


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64)


def brute_isomorphic(facets1, facets2) -> bool:
    """Try every vertex bijection (vectorised); only for small vertex counts."""
    f1 = [tuple(f) for f in facets1]
    f2 = [tuple(f) for f in facets2]
    v1 = sorted({v for f in f1 for v in f})
    v2 = sorted({v for f in f2 for v in f})
    if len(v1) != len(v2) or len(f1) != len(f2):
        return False
    if {len(f) for f in f1} != {len(f) for f in f2}:
        return False
    r1 = {v: i for i, v in enumerate(v1)}
    r2 = {v: i for i, v in enumerate(v2)}
    F1 = np.array([[r1[v] for v in f] for f in f1], dtype=np.int64)
    target = np.sort(np.array([sum(1 << r2[v] for v in f) for f in f2], dtype=np.int64))
    P = _perms(len(v1))
    codes = np.left_shift(1, P[:, F1]).sum(axis=2)
    codes.sort(axis=1)
    return bool((codes == target).all(axis=1).any())


def flag_fvector(facets):
    """f-vector of the order complex of the face poset, by enumerating chains."""
    faces = sorted(closure(facets), key=lambda f: (len(f), sorted(f)))
    up = {f: [g for g in faces if len(g) > len(f) and f < g] for f in faces}
    counts = {}

    def walk(f, length):
        counts[length] = counts.get(length, 0) + 1
        for g in up[f]:
            walk(g, length + 1)

    for f in faces:
        walk(f, 1)
    return tuple(counts[k] for k in sorted(counts))


def rwpe_dense(A: np.ndarray, steps: int) -> np.ndarray:
    P = A / A.sum(axis=1, keepdims=True)
    return np.stack([np.diag(np.linalg.matrix_power(P, k)) for k in range(1, steps + 1)], axis=1)
