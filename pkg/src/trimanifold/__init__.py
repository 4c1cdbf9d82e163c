"""Combinatorial 2- and 3-manifolds: invariants, Pachner moves, connected sums,
subdivisions, deduplication and dataset assembly."""

__version__ = "0.1.0"

from .complex import (
    FVector,
    InvariantSummary,
    SimplicialComplex,
    SurfaceClass,
    betti_gf2,
    classify_surface,
    euler_characteristic,
    f_vector,
    from_top_faces,
    invariants,
    is_combinatorial_manifold,
    is_orientable,
    link,
    minimal_triangulation,
)
from .isomorphism import DedupReport, WLDigest, are_isomorphic, complex_digest, deduplicate, wl_hash
from .moves import MoveDescriptor, MoveKind, apply_pachner, enumerate_valid_moves, random_pachner_walk
from .records import DatasetRecord, Provenance, parse, serialize
from .subdivision import (
    SubdivisionScheme,
    barycentric_subdivide,
    graded_stellar,
    stellar_subdivide,
    top_stellar,
)
from .surgery import build_surface, connected_sum
from .represent import dual_graph, hasse_diagram, incidence_graph, skeleton_graph
