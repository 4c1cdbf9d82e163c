"""Pachner moves (bistellar flips) in dimensions 2 and 3, and random walks built from them.

A move replaces a ball made of ``k`` facets by the complementary ball made
of ``d + 2 - k`` facets on the same ``d + 2`` vertices. On a simplicial
complex the move is only legal if the face it would create is absent;
otherwise the result would have a repeated face.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Iterator

from ._rng import derive_rng
from .complex import SimplicialComplex, Simplex, _require_manifold
from .errors import FaceNotPresent, InvalidMove, InvalidParameter

log = logging.getLogger(__name__)


class MoveKind(enum.Enum):
    M13 = "1-3"
    M31 = "3-1"
    M22 = "2-2"
    M14 = "1-4"
    M41 = "4-1"
    M23 = "2-3"
    M32 = "3-2"

    @property
    def manifold_dimension(self) -> int:
        return 2 if self in _KINDS_2D else 3

    @property
    def anchor_dimension(self) -> int:
        return _ANCHOR_DIM[self]

    @property
    def grows(self) -> bool:
        """Whether the move adds a vertex."""
        return self in (MoveKind.M13, MoveKind.M14)


_KINDS_2D = (MoveKind.M13, MoveKind.M31, MoveKind.M22)
_KINDS_3D = (MoveKind.M14, MoveKind.M41, MoveKind.M23, MoveKind.M32)
_ORDER = {k: i for i, k in enumerate(MoveKind)}
_ANCHOR_DIM = {
    MoveKind.M13: 2, MoveKind.M31: 0, MoveKind.M22: 1,
    MoveKind.M14: 3, MoveKind.M41: 0, MoveKind.M23: 2, MoveKind.M32: 1,
}

# f-vector change of each move
F_VECTOR_DELTA = {
    MoveKind.M13: (1, 3, 2),
    MoveKind.M31: (-1, -3, -2),
    MoveKind.M22: (0, 0, 0),
    MoveKind.M14: (1, 4, 6, 3),
    MoveKind.M41: (-1, -4, -6, -3),
    MoveKind.M23: (0, 1, 2, 1),
    MoveKind.M32: (0, -1, -2, -1),
}


@dataclass(frozen=True)
class MoveDescriptor:
    kind: MoveKind
    anchor: Simplex

    def __post_init__(self):
        anchor = tuple(self.anchor)
        if any(a >= b for a, b in zip(anchor, anchor[1:])):
            anchor = tuple(sorted(anchor))
            object.__setattr__(self, "anchor", anchor)
        if len(anchor) - 1 != self.kind.anchor_dimension:
            raise ValueError(
                f"{self.kind.name} needs a {self.kind.anchor_dimension}-simplex anchor, got {anchor}"
            )

    @property
    def sort_key(self):
        return (_ORDER[self.kind], self.anchor)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __str__(self):
        return f"{self.kind.name}{list(self.anchor)}"


def _replacement(T: SimplicialComplex, m: MoveDescriptor) -> tuple[tuple[Simplex, ...], list[Simplex]]:
    """Facets removed and added by ``m``; raises if the move is illegal on ``T``."""
    d = T.dimension
    if m.kind.manifold_dimension != d:
        raise InvalidMove(f"{m.kind.name} is not a move in dimension {d}")
    a = m.anchor
    if a not in T:
        raise FaceNotPresent(a)
    star = T.star_facets(a)
    kind = m.kind

    if kind in (MoveKind.M13, MoveKind.M14):
        if len(a) != d + 1:
            raise InvalidMove(f"{a} is not a facet")
        v = max(v for (v,) in T.faces[0]) + 1
        return (a,), [a[:i] + a[i + 1:] + (v,) for i in range(d + 1)]

    if kind in (MoveKind.M31, MoveKind.M41):
        if len(star) != d + 1:
            raise InvalidMove(f"vertex {a[0]} lies in {len(star)} facets, needs {d + 1}")
        new = tuple(sorted({w for f in star for w in f} - {a[0]}))
        if len(new) != d + 1:
            raise InvalidMove(f"link of vertex {a[0]} is not the boundary of a simplex")
        if new in T:
            raise InvalidMove(f"{kind.name} would duplicate {new}", blocking=new)
        return star, [new]

    if kind is MoveKind.M22:
        if len(star) != 2:
            raise InvalidMove(f"edge {a} lies in {len(star)} triangles")
        (c,) = set(star[0]) - set(a)
        (e,) = set(star[1]) - set(a)
        new_edge = tuple(sorted((c, e)))
        if new_edge in T:
            raise InvalidMove(f"edge {new_edge} already exists", blocking=new_edge)
        return star, [tuple(sorted((a[0], c, e))), tuple(sorted((a[1], c, e)))]

    if kind is MoveKind.M23:
        if len(star) != 2:
            raise InvalidMove(f"triangle {a} lies in {len(star)} tetrahedra")
        (p,) = set(star[0]) - set(a)
        (q,) = set(star[1]) - set(a)
        new_edge = tuple(sorted((p, q)))
        if new_edge in T:
            raise InvalidMove(f"edge {new_edge} already exists", blocking=new_edge)
        return star, [tuple(sorted(a[:i] + a[i + 1:] + new_edge)) for i in range(3)]

    # M32
    if len(star) != 3:
        raise InvalidMove(f"edge {a} lies in {len(star)} tetrahedra, needs 3")
    tri = tuple(sorted({w for f in star for w in f} - set(a)))
    if len(tri) != 3:
        raise InvalidMove(f"link of edge {a} is not a triangle boundary")
    if tri in T:
        raise InvalidMove(f"triangle {tri} already exists", blocking=tri)
    return star, [tuple(sorted(tri + (a[0],))), tuple(sorted(tri + (a[1],)))]


def _valid_moves(T: SimplicialComplex) -> list[MoveDescriptor]:
    # same conditions as _replacement, scanned directly on a closed manifold
    d = T.dimension
    star = T.star_index
    edges, triangles = T.faces[1], T.faces[2]
    if d == 2:
        grow, shrink, flips = MoveKind.M13, MoveKind.M31, ((MoveKind.M22, 1, 2),)
    else:
        grow, shrink, flips = MoveKind.M14, MoveKind.M41, ((MoveKind.M23, 2, 2), (MoveKind.M32, 1, 3))
    top = T.faces[d]
    out = [MoveDescriptor(grow, f) for f in T.facets]
    for v in T.simplices(0):
        fs = star[v]
        if len(fs) == d + 1:
            new = tuple(sorted({w for f in fs for w in f} - {v[0]}))
            if len(new) == d + 1 and new not in top:
                out.append(MoveDescriptor(shrink, v))
    for kind, k, valence in flips:
        created = edges if kind is not MoveKind.M32 else triangles
        for s in T.simplices(k):
            fs = star[s]
            if len(fs) != valence:
                continue
            new = tuple(sorted({w for f in fs for w in f}.difference(s)))
            if len(new) == (3 if kind is MoveKind.M32 else 2) and new not in created:
                out.append(MoveDescriptor(kind, s))
    return out


def enumerate_valid_moves(T: SimplicialComplex) -> list[MoveDescriptor]:
    """All legal Pachner moves on ``T``, sorted by kind then anchor."""
    _require_manifold(T)
    return _valid_moves(T)


def apply_pachner(T: SimplicialComplex, m: MoveDescriptor) -> SimplicialComplex:
    """Apply a single move; the result is relabelled to dense vertex ids.

    Raises :class:`InvalidMove` (with ``blocking`` set to the offending face
    where applicable) or :class:`FaceNotPresent`.
    """
    removed, added = _replacement(T, m)
    gone = set(removed)
    facets = [f for f in T.facets if f not in gone]
    facets.extend(added)
    return SimplicialComplex._from_facets(facets, T.dimension)


def iter_pachner_walk(T: SimplicialComplex, steps: int, max_vertices: int, seed) -> Iterator[tuple[MoveDescriptor, SimplicialComplex]]:
    """Yield ``(move, complex)`` after each step of a random walk.

    Each step draws uniformly from the legal moves; vertex-adding moves are
    dropped once the complex has ``max_vertices`` vertices. Stops early if no
    move is left.
    """
    if steps < 0:
        raise InvalidParameter("steps must be non-negative")
    if max_vertices < T.vertex_count:
        raise InvalidParameter(
            f"max_vertices={max_vertices} is below the current vertex count {T.vertex_count}"
        )
    _require_manifold(T)
    rng = derive_rng(seed)
    for step in range(steps):
        moves = _valid_moves(T)
        if T.vertex_count >= max_vertices:
            moves = [m for m in moves if not m.kind.grows]
        if not moves:
            log.warning("walk stopped after %d of %d steps: no legal move", step, steps)
            return
        m = rng.choice(moves)
        T = apply_pachner(T, m)
        yield m, T


def random_pachner_walk(T: SimplicialComplex, steps: int, max_vertices: int, seed) -> SimplicialComplex:
    """Final complex of :func:`iter_pachner_walk`."""
    for _, T in iter_pachner_walk(T, steps, max_vertices, seed):
        pass
    return T
