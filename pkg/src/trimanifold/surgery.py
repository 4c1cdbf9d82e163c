"""Connected sums of closed triangulated surfaces."""
from __future__ import annotations

from collections import Counter
from itertools import combinations
from typing import Sequence

from ._rng import derive_rng
from .complex import SimplicialComplex, _require_manifold, minimal_triangulation
from .errors import FaceNotPresent, InvalidParameter, NotAManifold, UnsupportedDimension


def connected_sum(M1: SimplicialComplex, M2: SimplicialComplex, t1: Sequence[int], t2: Sequence[int]) -> SimplicialComplex:
    """Glue ``M1`` and ``M2`` after deleting triangle ``t1`` from ``M1`` and ``t2`` from ``M2``.

    The vertices of ``t2`` are identified with those of ``t1`` in sorted
    order; every other vertex of ``M2`` gets a fresh label. Edges and
    vertices of the deleted triangles are kept, so each boundary edge ends up
    with one triangle from each side.
    """
    for M in (M1, M2):
        if M.dimension != 2:
            raise UnsupportedDimension(f"connected sums are only defined here for surfaces, got dimension {M.dimension}")
        _require_manifold(M)
    t1, t2 = tuple(sorted(t1)), tuple(sorted(t2))
    if len(t1) != 3 or t1 not in M1.faces[2]:
        raise FaceNotPresent(t1, f"{t1} is not a triangle of the first surface")
    if len(t2) != 3 or t2 not in M2.faces[2]:
        raise FaceNotPresent(t2, f"{t2} is not a triangle of the second surface")

    offset = max(v for (v,) in M1.faces[0]) + 1
    relabel = dict(zip(t2, t1))
    for (v,) in M2.simplices(0):
        if v not in relabel:
            relabel[v] = offset
            offset += 1
    facets = [f for f in M1.facets if f != t1]
    facets += [tuple(sorted(relabel[v] for v in f)) for f in M2.facets if f != t2]

    edge_use = Counter(e for f in facets for e in combinations(f, 2))
    if len(set(facets)) != len(facets) or any(c != 2 for c in edge_use.values()):
        raise NotAManifold("gluing did not produce a closed surface")
    return SimplicialComplex._from_facets(facets, 2)


def build_surface(orientable: bool, count: int, seed) -> SimplicialComplex:
    """Closed surface with ``count`` handles (orientable) or crosscaps.

    Starts from the tetrahedron boundary and attaches minimal tori or
    projective planes one at a time along randomly chosen triangles.
    """
    if count < 0 or (not orientable and count < 1):
        raise InvalidParameter(
            f"need genus >= 0 or crosscaps >= 1, got orientable={orientable}, count={count}"
        )
    rng = derive_rng(seed, "build_surface", orientable, count)
    piece = minimal_triangulation("T2" if orientable else "RP2")
    M = minimal_triangulation("S2")
    for _ in range(count):
        M = connected_sum(M, piece, rng.choice(M.facets), rng.choice(piece.facets))
    return M
