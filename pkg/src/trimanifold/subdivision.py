"""Refinements that keep the homeomorphism type: stellar and barycentric subdivision."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from ._rng import derive_rng
from .complex import SimplicialComplex
from .errors import FaceNotPresent, InvalidParameter, NotMaximal


def stellar_subdivide(T: SimplicialComplex, s: Sequence[int]) -> SimplicialComplex:
    """Cone a new vertex over the boundary of the maximal face ``s``."""
    s = tuple(sorted(s))
    if s not in T:
        raise FaceNotPresent(s)
    if len(s) != T.dimension + 1:
        raise NotMaximal(f"{s} is not a maximal face")
    return _stellar_many(T, [s])


def _stellar_many(T: SimplicialComplex, chosen) -> SimplicialComplex:
    chosen = set(chosen)
    facets = [f for f in T.facets if f not in chosen]
    v = max(v for (v,) in T.faces[0]) + 1
    for s in sorted(chosen):
        facets.extend(s[:i] + s[i + 1:] + (v,) for i in range(len(s)))
        v += 1
    return SimplicialComplex._from_facets(facets, T.dimension)


def graded_stellar(T: SimplicialComplex, n: int, seed) -> SimplicialComplex:
    """Stellar-subdivide random facets until the complex has exactly ``n`` vertices."""
    if n < T.vertex_count:
        raise InvalidParameter(f"target {n} is below the current vertex count {T.vertex_count}")
    rng = derive_rng(seed, "graded_stellar", n)
    while T.vertex_count < n:
        T = _stellar_many(T, [rng.choice(T.facets)])
    return T


def _ceil_fraction(p, count: int) -> int:
    # exact ceiling: float products like 0.7 * 10 overshoot by an ulp
    return math.ceil(Fraction(p).limit_denominator(10**9) * count)


def top_stellar(T: SimplicialComplex, p: float, seed) -> SimplicialComplex:
    """Subdivide ``ceil(p * #facets)`` randomly chosen original facets once each."""
    if not 0 < p <= 1:
        raise InvalidParameter(f"proportion must lie in (0, 1], got {p}")
    facets = list(T.facets)
    k = _ceil_fraction(p, len(facets))
    rng = derive_rng(seed, "top_stellar", p)
    chosen = facets if k == len(facets) else rng.sample(facets, k)
    return _stellar_many(T, chosen)


def barycentric_subdivide(T: SimplicialComplex) -> SimplicialComplex:
    """Full barycentric subdivision.

    Vertices of the result are the simplices of ``T``, numbered by
    (dimension, lexicographic order). Facets are the full flags
    ``vertex < edge < ... < facet``, i.e. one per ordering of a facet's vertices.
    """
    index = {s: i for i, s in enumerate(T.all_simplices())}
    flags = []
    for f in T.facets:
        for order in permutations(f):
            flags.append(tuple(sorted(index[tuple(sorted(order[: k + 1]))] for k in range(len(f)))))
    return SimplicialComplex._closure(flags, T.dimension)


class SchemeKind(enum.Enum):
    STELLAR_ONE = "stellar"
    GRADED_STELLAR = "graded"
    TOP_STELLAR = "top"
    BARYCENTRIC = "barycentric"


@dataclass(frozen=True)
class SubdivisionScheme:
    """A refinement recipe. ``target_vertices`` goes with graded, ``proportion`` with top."""

    kind: SchemeKind
    target_vertices: int | None = None
    proportion: float | None = None

    def __post_init__(self):
        graded = self.kind is SchemeKind.GRADED_STELLAR
        top = self.kind is SchemeKind.TOP_STELLAR
        if graded != (self.target_vertices is not None) or top != (self.proportion is not None):
            raise InvalidParameter(f"parameters do not match scheme {self.kind.value}")
        if top and not 0 < self.proportion <= 1:
            raise InvalidParameter(f"proportion must lie in (0, 1], got {self.proportion}")

    @property
    def name(self) -> str:
        if self.kind is SchemeKind.GRADED_STELLAR:
            return f"graded-{self.target_vertices}"
        if self.kind is SchemeKind.TOP_STELLAR:
            return f"top-{self.proportion:g}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> SubdivisionScheme:
        """Parse ``graded-16``, ``top-0.75``, ``barycentric`` or ``stellar``."""
        head, _, arg = text.partition("-")
        if head == "graded" and arg:
            return cls(SchemeKind.GRADED_STELLAR, target_vertices=int(arg))
        if head == "top" and arg:
            return cls(SchemeKind.TOP_STELLAR, proportion=float(arg))
        if text == "barycentric":
            return cls(SchemeKind.BARYCENTRIC)
        if text == "stellar":
            return cls(SchemeKind.STELLAR_ONE)
        raise InvalidParameter(f"unknown subdivision scheme {text!r}")

    def apply(self, T: SimplicialComplex, seed) -> SimplicialComplex:
        if self.kind is SchemeKind.GRADED_STELLAR:
            return graded_stellar(T, self.target_vertices, seed)
        if self.kind is SchemeKind.TOP_STELLAR:
            return top_stellar(T, self.proportion, seed)
        if self.kind is SchemeKind.BARYCENTRIC:
            return barycentric_subdivide(T)
        rng = derive_rng(seed, "stellar")
        return stellar_subdivide(T, rng.choice(T.facets))
