"""Graph views of a triangulation and node-feature encodings for them.

Node order is canonical everywhere: ascending dimension, then the source
simplex's vertex list in lexicographic order. Encodings follow that order
row by row.
"""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .complex import SimplicialComplex, Simplex, _require_manifold
from .errors import InvalidParameter, IsolatedNode

RANDOM_FEATURE_DIM = 8
RWPE_STEPS = 8


class GraphKind(enum.Enum):
    SKELETON = "skeleton"
    DUAL = "dual"
    HASSE = "hasse"
    INCIDENCE = "incidence"


class Node(NamedTuple):
    simplex: Simplex
    role: str
    dimension: int


@dataclass(frozen=True)
class RepresentationGraph:
    """A graph whose nodes stand for simplices of a complex.

    ``edges`` are index pairs into ``nodes``. For Hasse diagrams an edge
    ``(i, j)`` always points from a simplex to one of its codimension-1
    faces; ``directed`` only says whether consumers should respect that.
    """

    kind: GraphKind
    nodes: tuple[Node, ...]
    edges: tuple[tuple[int, int], ...]
    directed: bool = False

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def neighbors(self) -> list[list[int]]:
        """Undirected neighbour lists."""
        out = [[] for _ in self.nodes]
        for i, j in self.edges:
            out[i].append(j)
            out[j].append(i)
        return out

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.node_count, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency matrix (direction dropped)."""
        n = self.node_count
        if not self.edges:
            return sp.csr_matrix((n, n))
        e = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))

    def to_dict(self) -> dict:
        return {
            "repr": self.kind.value,
            "directed": self.directed,
            "nodes": [
                {"role": n.role, "dimension": n.dimension, "simplex": list(n.simplex)}
                for n in self.nodes
            ],
            "edges": [list(e) for e in self.edges],
        }


def skeleton_graph(T: SimplicialComplex) -> RepresentationGraph:
    nodes = tuple(Node(v, "vertex", 0) for v in T.simplices(0))
    index = {n.simplex[0]: i for i, n in enumerate(nodes)}
    edges = tuple(sorted((index[a], index[b]) for a, b in T.simplices(1)))
    return RepresentationGraph(GraphKind.SKELETON, nodes, edges)


def dual_graph(T: SimplicialComplex) -> RepresentationGraph:
    """One node per facet, one edge per shared ridge."""
    _require_manifold(T)
    nodes = tuple(Node(f, "facet", T.dimension) for f in T.facets)
    owners = defaultdict(list)
    for i, f in enumerate(T.facets):
        for k in range(len(f)):
            owners[f[:k] + f[k + 1:]].append(i)
    edges = tuple(sorted(tuple(sorted(pair)) for pair in owners.values()))
    return RepresentationGraph(GraphKind.DUAL, nodes, edges)


def hasse_diagram(T: SimplicialComplex, directed: bool = False) -> RepresentationGraph:
    """Face poset covering relation; edges go from each simplex to its facets."""
    simplices = T.all_simplices()
    index = {s: i for i, s in enumerate(simplices)}
    nodes = tuple(Node(s, "simplex", len(s) - 1) for s in simplices)
    edges = []
    for s in simplices:
        if len(s) > 1:
            i = index[s]
            edges.extend((i, index[s[:k] + s[k + 1:]]) for k in range(len(s)))
    return RepresentationGraph(GraphKind.HASSE, nodes, tuple(sorted(edges)), directed)


def incidence_graph(T: SimplicialComplex) -> RepresentationGraph:
    """Bipartite vertex/face membership graph (faces of every dimension >= 1)."""
    simplices = T.all_simplices()
    index = {s: i for i, s in enumerate(simplices)}
    nodes = tuple(
        Node(s, "vertex" if len(s) == 1 else "face", len(s) - 1) for s in simplices
    )
    edges = []
    for s in simplices:
        if len(s) > 1:
            j = index[s]
            edges.extend((index[(v,)], j) for v in s)
    return RepresentationGraph(GraphKind.INCIDENCE, nodes, tuple(sorted(edges)))


REPRESENTATIONS = {
    "skeleton": skeleton_graph,
    "dual": dual_graph,
    "hasse": hasse_diagram,
    "incidence": incidence_graph,
}


class Encoding(enum.Enum):
    R = "r"
    D = "d"
    RWPE = "rwpe"
    MC = "mc"


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    values: np.ndarray
    encoding: Encoding

    @property
    def shape(self):
        return self.values.shape


def encode_random(G: RepresentationGraph, k: int = RANDOM_FEATURE_DIM, seed=0) -> FeatureMatrix:
    """I.i.d. uniform features in ``[0, 1]``."""
    if k < 1:
        raise InvalidParameter(f"feature dimension must be >= 1, got {k}")
    rng = np.random.default_rng(seed)
    return FeatureMatrix(rng.random((G.node_count, k)), Encoding.R)


def encode_degree(G: RepresentationGraph) -> FeatureMatrix:
    return FeatureMatrix(G.degrees().astype(np.float64)[:, None], Encoding.D)


def encode_rwpe(G: RepresentationGraph, steps: int = RWPE_STEPS) -> FeatureMatrix:
    """Return probabilities of the simple random walk, ``diag(P^k)`` for ``k = 1..steps``.

    ``P = D^-1 A`` on the undirected graph (direction is dropped). Float64
    sparse products; agrees with exact values to about 1e-12.
    """
    if steps < 1:
        raise InvalidParameter(f"steps must be >= 1, got {steps}")
    A = G.adjacency()
    deg = np.asarray(A.sum(axis=1)).ravel()
    if G.node_count and deg.min() == 0:
        raise IsolatedNode(f"node {int(np.argmin(deg))} has no neighbours")
    P = sp.diags(1.0 / deg) @ A
    out = np.empty((G.node_count, steps))
    M = P
    for k in range(steps):
        out[:, k] = M.diagonal()
        if k + 1 < steps:
            M = M @ P
    return FeatureMatrix(out, Encoding.RWPE)


def encode_moment_curve(G: RepresentationGraph, manifold_dim: int) -> FeatureMatrix:
    """Node ``i`` of ``n`` maps to ``[t, t^2, ..., t^(2d+1)]`` with ``t = i / (n - 1)``."""
    n = G.node_count
    if n < 2:
        raise InvalidParameter("moment curve needs at least two nodes")
    if manifold_dim not in (2, 3):
        raise InvalidParameter(f"manifold dimension must be 2 or 3, got {manifold_dim}")
    t = np.arange(n, dtype=np.float64) / (n - 1)
    powers = np.arange(1, 2 * manifold_dim + 2)
    return FeatureMatrix(t[:, None] ** powers[None, :], Encoding.MC)


def encode(G: RepresentationGraph, encoding, *, manifold_dim: int = 2, seed=0, k: int = RANDOM_FEATURE_DIM, steps: int = RWPE_STEPS) -> FeatureMatrix:
    encoding = Encoding(encoding)
    if encoding is Encoding.R:
        return encode_random(G, k, seed)
    if encoding is Encoding.D:
        return encode_degree(G)
    if encoding is Encoding.RWPE:
        return encode_rwpe(G, steps)
    return encode_moment_curve(G, manifold_dim)
