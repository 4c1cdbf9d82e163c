"""Simplicial complexes and their topological invariants.

A complex stores its full face set (every dimension), grouped by dimension.
Simplices are plain sorted tuples of non-negative vertex ids. All public
constructors relabel vertices densely to ``0 .. n-1``, preserving the
relative order of the input labels.
"""
from __future__ import annotations

import warnings
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    DuplicateTopFace,
    EmptyInput,
    FaceNotPresent,
    NotAManifold,
    ParityViolation,
    UnsupportedDimension,
    WrongFaceArity,
)

Simplex = tuple[int, ...]

MANIFOLD_DIMENSIONS = (2, 3)


def simplex(vertices: Iterable[int]) -> Simplex:
    """Return ``vertices`` as a canonical simplex (sorted tuple of distinct ints)."""
    s = tuple(sorted(int(v) for v in vertices))
    if not s:
        raise ValueError("a simplex needs at least one vertex")
    if s[0] < 0:
        raise ValueError(f"negative vertex id in {s}")
    if any(a == b for a, b in zip(s, s[1:])):
        raise ValueError(f"repeated vertex in {s}")
    return s


class FVector(tuple):
    """Simplex counts ``(f0, f1, ..., fd)``."""

    @property
    def euler_characteristic(self) -> int:
        return sum(c if k % 2 == 0 else -c for k, c in enumerate(self))


@dataclass(frozen=True)
class SimplicialComplex:
    """An immutable, downward-closed set of simplices.

    ``faces[k]`` is the frozenset of k-simplices. ``dimension`` is the largest
    k with a non-empty ``faces[k]`` (``-1`` for the empty complex, which
    shows up as the link of a facet).

    Build instances with :meth:`from_top_faces`; the raw constructor trusts
    its input.
    """

    dimension: int
    faces: tuple[frozenset, ...]
    duplicate_top_faces: int = field(default=0, compare=False, repr=False)

    @classmethod
    def from_top_faces(cls, top_faces: Iterable[Sequence[int]], dimension: int) -> SimplicialComplex:
        """Close the given top faces downward and relabel vertices densely.

        Every face must have exactly ``dimension + 1`` distinct vertices.
        Repeated faces are collapsed and counted in ``duplicate_top_faces``
        (a :class:`DuplicateTopFace` warning is emitted).
        """
        top = [tuple(f) for f in top_faces]
        if not top:
            raise EmptyInput("no top faces given")
        if dimension < 0:
            raise WrongFaceArity(f"dimension must be non-negative, got {dimension}")
        for f in top:
            if len(f) != dimension + 1 or len(set(f)) != len(f):
                raise WrongFaceArity(
                    f"face {list(f)} does not have {dimension + 1} distinct vertices"
                )
        labels = sorted({v for f in top for v in f})
        relabel = {v: i for i, v in enumerate(labels)}
        facets = {tuple(sorted(relabel[v] for v in f)) for f in top}
        dupes = len(top) - len(facets)
        if dupes:
            warnings.warn(DuplicateTopFace(f"{dupes} repeated top face(s) collapsed"), stacklevel=2)
        return cls._closure(facets, dimension, duplicate_top_faces=dupes)

    @classmethod
    def _closure(cls, facets: Iterable[Simplex], dimension: int, duplicate_top_faces: int = 0) -> SimplicialComplex:
        """Downward closure of sorted facet tuples, no relabelling."""
        layers = [set() for _ in range(dimension + 1)]
        for f in facets:
            for k in range(1, dimension + 2):
                layers[k - 1].update(combinations(f, k))
        return cls(dimension, tuple(frozenset(s) for s in layers), duplicate_top_faces)

    @classmethod
    def _from_facets(cls, facets: Iterable[Simplex], dimension: int) -> SimplicialComplex:
        """Canonicalize labels of already-valid sorted facets (internal fast path)."""
        facets = list(facets)
        labels = sorted({v for f in facets for v in f})
        if labels and labels[-1] == len(labels) - 1:
            return cls._closure(facets, dimension)
        relabel = {v: i for i, v in enumerate(labels)}
        return cls._closure((tuple(relabel[v] for v in f) for f in facets), dimension)

    # -- basic accessors -------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.faces[0]) if self.faces else 0

    @cached_property
    def facets(self) -> tuple[Simplex, ...]:
        """Maximal faces of top dimension, sorted lexicographically."""
        if self.dimension < 0:
            return ()
        return tuple(sorted(self.faces[self.dimension]))

    @cached_property
    def f_vector(self) -> FVector:
        return FVector(len(layer) for layer in self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.f_vector.euler_characteristic

    def simplices(self, k: int) -> list[Simplex]:
        """Sorted k-simplices."""
        if k < 0 or k > self.dimension:
            return []
        return sorted(self.faces[k])

    def all_simplices(self) -> list[Simplex]:
        """Every simplex, ordered by dimension then lexicographically."""
        return [s for k in range(self.dimension + 1) for s in self.simplices(k)]

    def __contains__(self, s) -> bool:
        s = tuple(s)
        k = len(s) - 1
        return 0 <= k <= self.dimension and s in self.faces[k]

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.faces)

    @cached_property
    def star_index(self) -> dict[Simplex, tuple[Simplex, ...]]:
        """Map from each face to the facets containing it."""
        index = defaultdict(list)
        d = self.dimension
        for f in self.facets:
            for k in range(1, d + 2):
                for s in combinations(f, k):
                    index[s].append(f)
        return {s: tuple(v) for s, v in index.items()}

    def star_facets(self, s: Simplex) -> tuple[Simplex, ...]:
        return self.star_index.get(tuple(s), ())

    @property
    def is_pure(self) -> bool:
        return len(self.star_index) == len(self)

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        """1-skeleton neighbourhoods."""
        nbrs = {v: set() for (v,) in self.faces[0]} if self.faces else {}
        if self.dimension >= 1:
            for a, b in self.faces[1]:
                nbrs[a].add(b)
                nbrs[b].add(a)
        return {v: frozenset(n) for v, n in nbrs.items()}

    def relabeled(self, mapping) -> SimplicialComplex:
        """Apply a vertex bijection (dict or sequence) and re-canonicalize."""
        return SimplicialComplex.from_top_faces(
            [[mapping[v] for v in f] for f in self.facets], self.dimension
        )

    def to_top_faces(self) -> list[list[int]]:
        return [list(f) for f in self.facets]

    # cached predicates, filled on demand by the module-level functions
    @cached_property
    def _manifold(self) -> bool:
        return _check_manifold(self)

    @cached_property
    def _orientable(self) -> bool:
        return _propagate_orientation(self)

    @cached_property
    def _betti(self) -> tuple[int, ...]:
        return _betti_gf2(self)


def from_top_faces(top_faces: Iterable[Sequence[int]], dimension: int) -> SimplicialComplex:
    return SimplicialComplex.from_top_faces(top_faces, dimension)


def f_vector(T: SimplicialComplex) -> FVector:
    return T.f_vector


def euler_characteristic(T: SimplicialComplex) -> int:
    return T.euler_characteristic


def link(T: SimplicialComplex, s: Sequence[int]) -> SimplicialComplex:
    """Link of ``s``: faces disjoint from ``s`` whose union with ``s`` is in ``T``.

    Vertex labels are kept as in ``T`` (no relabelling), so the result can be
    compared directly against faces of ``T``. The link of a facet is the empty
    complex (dimension -1).
    """
    s = tuple(sorted(s))
    if s not in T:
        raise FaceNotPresent(s)
    # maximal faces containing s; for a pure complex these are the facets
    cofaces = T.star_facets(s)
    if not cofaces:
        raise FaceNotPresent(s, f"{s} is not contained in any top face")
    sset = set(s)
    rest = [tuple(v for v in f if v not in sset) for f in cofaces]
    k = T.dimension - len(s)
    if k < 0:
        return SimplicialComplex(-1, ())
    return SimplicialComplex._closure(rest, k)


def connected_components(T: SimplicialComplex) -> list[list[int]]:
    """Vertex sets of the connected components of the 1-skeleton."""
    adj = T.adjacency
    seen = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def _is_cycle(edges: list[Simplex]) -> bool:
    deg = defaultdict(list)
    for a, b in edges:
        deg[a].append(b)
        deg[b].append(a)
    if len(deg) != len(edges) or any(len(n) != 2 for n in deg.values()):
        return False
    start = edges[0][0]
    prev, cur, steps = None, start, 0
    while True:
        a, b = deg[cur]
        nxt = b if a == prev else a
        prev, cur = cur, nxt
        steps += 1
        if cur == start:
            break
    return steps == len(edges)


def _is_two_sphere(triangles: list[Simplex]) -> bool:
    # closed (every edge in exactly two triangles), connected, chi = 2
    edge_count = defaultdict(int)
    nbrs = defaultdict(set)
    for t in triangles:
        for e in combinations(t, 2):
            edge_count[e] += 1
        a, b, c = t
        nbrs[a].update((b, c))
        nbrs[b].update((a, c))
        nbrs[c].update((a, b))
    if any(c != 2 for c in edge_count.values()):
        return False
    if len(nbrs) - len(edge_count) + len(triangles) != 2:
        return False
    start = next(iter(nbrs))
    seen = {start}
    stack = [start]
    while stack:
        for w in nbrs[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nbrs)


def _check_manifold(T: SimplicialComplex) -> bool:
    if T.dimension not in MANIFOLD_DIMENSIONS:
        raise UnsupportedDimension(f"manifold checks need dimension 2 or 3, got {T.dimension}")
    if not T.is_pure:
        return False
    if len(connected_components(T)) != 1:
        return False
    for (v,) in T.faces[0]:
        rest = [tuple(w for w in f if w != v) for f in T.star_facets((v,))]
        if T.dimension == 2:
            if not _is_cycle(rest):
                return False
        elif not _is_two_sphere(rest):
            return False
    return True


def is_combinatorial_manifold(T: SimplicialComplex) -> bool:
    """True iff ``T`` is connected, pure, and every vertex link is a (d-1)-sphere.

    In dimension 2 a link must be a single cycle; in dimension 3 it must be a
    closed connected surface with Euler characteristic 2.
    """
    return T._manifold


def _require_manifold(T: SimplicialComplex) -> None:
    if not is_combinatorial_manifold(T):
        raise NotAManifold("input is not a connected combinatorial manifold")


def _propagate_orientation(T: SimplicialComplex) -> bool:
    # sign[f] orients facet f relative to its sorted vertex order; deleting
    # position i induces (-1)**i * sign[f] on the ridge. Neighbours must
    # induce opposite orientations on the ridge they share.
    ridges = defaultdict(list)
    for idx, f in enumerate(T.facets):
        for i in range(len(f)):
            ridges[f[:i] + f[i + 1:]].append((idx, i))
    for owners in ridges.values():
        if len(owners) != 2:
            raise NotAManifold("a ridge does not lie in exactly two facets")
    neighbours = defaultdict(list)
    for (f, i), (g, j) in ridges.values():
        rel = -1 if (i + j) % 2 == 0 else 1
        neighbours[f].append((g, rel))
        neighbours[g].append((f, rel))
    sign = {}
    for root in range(len(T.facets)):
        if root in sign:
            continue
        sign[root] = 1
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for g, rel in neighbours[f]:
                want = rel * sign[f]
                if g not in sign:
                    sign[g] = want
                    queue.append(g)
                elif sign[g] != want:
                    return False
    return True


def is_orientable(T: SimplicialComplex) -> bool:
    """Whether the facets admit a coherent orientation."""
    _require_manifold(T)
    return T._orientable


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a matrix given as integer bitmask rows."""
    pivots = {}
    rank = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = row
                rank += 1
                break
            row ^= p
    return rank


def boundary_rank_gf2(T: SimplicialComplex, k: int) -> int:
    """Rank of the boundary map from k-chains to (k-1)-chains, mod 2."""
    if k <= 0 or k > T.dimension:
        return 0
    index = {s: i for i, s in enumerate(T.simplices(k - 1))}
    rows = []
    for s in T.faces[k]:
        mask = 0
        for i in range(len(s)):
            mask |= 1 << index[s[:i] + s[i + 1:]]
        rows.append(mask)
    return gf2_rank(rows)


def _betti_gf2(T: SimplicialComplex) -> tuple[int, ...]:
    ranks = [boundary_rank_gf2(T, k) for k in range(T.dimension + 2)]
    return tuple(
        len(T.faces[k]) - ranks[k] - ranks[k + 1] for k in range(T.dimension + 1)
    )


def betti_gf2(T: SimplicialComplex) -> tuple[int, ...]:
    """Betti numbers with mod-2 coefficients, ``(b0, ..., bd)``."""
    return T._betti


@dataclass(frozen=True)
class SurfaceClass:
    """Homeomorphism type of a closed connected surface."""

    orientable: bool
    genus_or_crosscaps: int

    def __post_init__(self):
        if self.genus_or_crosscaps < 0 or (not self.orientable and self.genus_or_crosscaps < 1):
            raise ParityViolation(f"no such surface: {self}")

    @property
    def canonical_name(self) -> str:
        if self.orientable:
            return "S2" if self.genus_or_crosscaps == 0 else f"T2#{self.genus_or_crosscaps}"
        return f"RP2#{self.genus_or_crosscaps}"

    @property
    def euler_characteristic(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus_or_crosscaps
        return 2 - self.genus_or_crosscaps

    @classmethod
    def from_invariants(cls, chi: int, orientable: bool) -> SurfaceClass:
        if orientable:
            if chi % 2 or chi > 2:
                raise ParityViolation(f"orientable closed surface cannot have chi={chi}")
            return cls(True, (2 - chi) // 2)
        if chi > 1:
            raise ParityViolation(f"non-orientable closed surface cannot have chi={chi}")
        return cls(False, 2 - chi)

    @classmethod
    def from_name(cls, name: str) -> SurfaceClass:
        if name == "S2":
            return cls(True, 0)
        head, sep, count = name.partition("#")
        if head == "T2":
            return cls(True, int(count) if sep else 1)
        if head == "RP2":
            return cls(False, int(count) if sep else 1)
        raise ValueError(f"unknown surface name {name!r}")

    def __str__(self):
        return self.canonical_name


def classify_surface(T: SimplicialComplex) -> SurfaceClass:
    """Classify a closed connected surface by Euler characteristic and orientability."""
    if T.dimension != 2:
        raise UnsupportedDimension(f"surface classification needs dimension 2, got {T.dimension}")
    _require_manifold(T)
    return SurfaceClass.from_invariants(T.euler_characteristic, T._orientable)


@dataclass(frozen=True)
class InvariantSummary:
    f_vector: FVector
    euler_characteristic: int
    orientable: bool
    betti_gf2: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "f_vector": list(self.f_vector),
            "euler_characteristic": self.euler_characteristic,
            "orientable": self.orientable,
            "betti_gf2": list(self.betti_gf2),
        }


def invariants(T: SimplicialComplex) -> InvariantSummary:
    return InvariantSummary(T.f_vector, T.euler_characteristic, is_orientable(T), betti_gf2(T))


# Minimal seed triangulations (1-based labels, relabelled on construction).
_SEED_FACETS = {
    "S2": [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)],
    # Moebius-Kantor / Csaszar torus: {i, i+1, i+3} and {i, i+2, i+3} mod 7
    "T2": [tuple(sorted(((i + a) % 7) + 1 for a in offs)) for i in range(7) for offs in ((0, 1, 3), (0, 2, 3))],
    # hemi-icosahedron: cone from 1 over the pentagon 2..6, plus five triangles
    "RP2": [
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
    ],
    "S3": [(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 4, 5), (1, 3, 4, 5), (2, 3, 4, 5)],
}


def minimal_triangulation(name: str) -> SimplicialComplex:
    """Seed complexes: ``"S2"`` (boundary of the tetrahedron), ``"T2"`` (7 vertices),
    ``"RP2"`` (6 vertices) and ``"S3"`` (boundary of the 4-simplex)."""
    try:
        facets = _SEED_FACETS[name]
    except KeyError:
        raise ValueError(f"unknown seed {name!r}; choose from {sorted(_SEED_FACETS)}") from None
    return SimplicialComplex.from_top_faces(facets, len(facets[0]) - 1)
