"""Duplicate detection for triangulations.

Three stages, cheapest first: f-vectors, a Weisfeiler-Leman hash of the
vertex/face incidence graph, and an exact vertex-bijection search. The first
two are one-sided: different keys prove non-isomorphism, equal keys prove
nothing.
"""
from __future__ import annotations

import json
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from hashlib import blake2b

from .complex import SimplicialComplex
from .errors import InvalidParameter
from .records import DatasetRecord
from .represent import RepresentationGraph, incidence_graph

log = logging.getLogger(__name__)

DIGEST_SIZE = 16  # bytes; frozen, dataset reproducibility depends on it
DEFAULT_MAX_GROUP = 5


class WLDigest(bytes):
    def __str__(self):
        return self.hex()


def _h(*parts: bytes) -> bytes:
    h = blake2b(digest_size=DIGEST_SIZE)
    for p in parts:
        h.update(p)
    return h.digest()


def wl_colors(G: RepresentationGraph) -> tuple[list[bytes], int]:
    """Stable 1-WL colours and the number of refinement rounds.

    Initial colours are ``(role, dimension)``. Each round a node's colour
    becomes the hash of its colour and the sorted multiset of neighbour
    colours (out- and in-neighbours kept apart when ``G.directed``).
    Iterates until the number of colour classes stops growing. Colours are
    comparable across graphs.
    """
    colors = [_h(f"{n.role}:{n.dimension}".encode()) for n in G.nodes]
    if G.directed:
        outs = [[] for _ in G.nodes]
        ins = [[] for _ in G.nodes]
        for i, j in G.edges:
            outs[i].append(j)
            ins[j].append(i)
    else:
        outs, ins = G.neighbors(), None
    classes = len(set(colors))
    rounds = 0
    while True:
        if ins is None:
            new = [_h(c, b"|", *sorted(colors[j] for j in outs[i])) for i, c in enumerate(colors)]
        else:
            new = [
                _h(c, b">", *sorted(colors[j] for j in outs[i]), b"<", *sorted(colors[j] for j in ins[i]))
                for i, c in enumerate(colors)
            ]
        rounds += 1
        new_classes = len(set(new))
        colors = new
        if new_classes == classes:
            return colors, rounds
        classes = new_classes


def wl_hash(G: RepresentationGraph) -> WLDigest:
    """128-bit digest of the stable colour multiset and the round count."""
    colors, rounds = wl_colors(G)
    return WLDigest(_h(G.kind.value.encode(), str(rounds).encode(), b"#", *sorted(colors)))


def _wl_state(T: SimplicialComplex):
    # cached on the instance; complexes are immutable
    state = T.__dict__.get("_wl_state")
    if state is None:
        G = incidence_graph(T)
        colors, rounds = wl_colors(G)
        digest = WLDigest(_h(G.kind.value.encode(), str(rounds).encode(), b"#", *sorted(colors)))
        vertex_color = {n.simplex[0]: colors[i] for i, n in enumerate(G.nodes) if n.dimension == 0}
        state = (digest, vertex_color)
        T.__dict__["_wl_state"] = state
    return state


def complex_digest(T: SimplicialComplex) -> WLDigest:
    """WL digest of the incidence graph of ``T``."""
    return _wl_state(T)[0]


def are_isomorphic(T1: SimplicialComplex, T2: SimplicialComplex) -> bool:
    """Exact test: is there a vertex bijection mapping the face set of ``T1`` onto ``T2``?

    Backtracking over vertices; candidate images must carry the same stable
    WL colour and preserve every face already fully mapped, in both
    directions.
    """
    if T1.dimension != T2.dimension or T1.f_vector != T2.f_vector:
        return False
    d1, col1 = _wl_state(T1)
    d2, col2 = _wl_state(T2)
    if d1 != d2:
        return False
    if T1.vertex_count == 0:
        return True

    by_color = defaultdict(set)
    for w, c in col2.items():
        by_color[c].add(w)
    candidates = {v: by_color[c] for v, c in col1.items()}
    if any(not c for c in candidates.values()):
        return False

    adj1, adj2 = T1.adjacency, T2.adjacency
    # order: start at the rarest colour, then always the vertex with the
    # most already-ordered neighbours
    order = []
    placed = set()
    remaining = set(col1)
    while remaining:
        if placed:
            v = max(remaining, key=lambda u: (len(adj1[u] & placed), -len(candidates[u]), -u))
        else:
            v = min(remaining, key=lambda u: (len(candidates[u]), u))
        order.append(v)
        placed.add(v)
        remaining.discard(v)

    position = {v: i for i, v in enumerate(order)}
    faces1 = defaultdict(list)
    for k in range(1, T1.dimension + 1):
        for s in T1.faces[k]:
            last = max(s, key=position.__getitem__)
            faces1[last].append(s)
    faces2 = defaultdict(list)
    for k in range(1, T2.dimension + 1):
        for s in T2.faces[k]:
            for w in s:
                faces2[w].append(s)
    back_neighbor = {v: [u for u in adj1[v] if position[u] < position[v]] for v in order}
    all2 = set().union(*T2.faces[1:]) if T2.dimension >= 1 else set()

    phi = {}
    used = set()

    def fits(v, w):
        closing = faces1[v]
        for s in closing:
            if tuple(sorted(phi[u] if u != v else w for u in s)) not in all2:
                return False
        count = 0
        for s in faces2[w]:
            if all(x == w or x in used for x in s):
                count += 1
        return count == len(closing)

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        nb = back_neighbor[v]
        if nb:
            pool = adj2[phi[nb[0]]] & candidates[v]
        else:
            pool = candidates[v]
        for w in sorted(pool - used):
            if fits(v, w):
                phi[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del phi[v]
                used.discard(w)
        return False

    return extend(0)


@dataclass
class DedupReport:
    input_count: int = 0
    kept_count: int = 0
    fvector_groups: int = 0
    wl_subsets: int = 0
    capped_subsets: int = 0
    removed_isomorphic: int = 0
    removed_group_cap: int = 0
    isomorphism_checks: int = 0
    removal_reasons: dict = field(default_factory=dict)

    @property
    def removed(self) -> int:
        return self.removed_isomorphic + self.removed_group_cap

    def to_dict(self) -> dict:
        return {
            "input": self.input_count,
            "kept": self.kept_count,
            "removed": self.removed,
            "stages": {
                "f_vector": {"groups": self.fvector_groups, "removed": 0},
                "wl_hash": {"subsets": self.wl_subsets, "removed": 0},
                "isomorphism": {"checks": self.isomorphism_checks, "removed": self.removed_isomorphic},
                "group_cap": {"subsets": self.capped_subsets, "removed": self.removed_group_cap},
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _digest_of(rec: DatasetRecord) -> bytes:
    return bytes(complex_digest(rec.complex))


def deduplicate(batch: list[DatasetRecord], max_group: int = DEFAULT_MAX_GROUP, jobs: int = 1) -> tuple[list[DatasetRecord], DedupReport]:
    """Drop records isomorphic to an earlier one.

    Records are grouped by (dimension, f-vector), then by WL digest. Digest
    subsets of at most ``max_group`` records are resolved with exact
    isomorphism checks; a larger subset keeps only its first record.
    "First" means first in serialized order, so the outcome does not
    depend on input order. ``removal_reasons`` maps each removed id to
    ``"isomorphic"`` or ``"group cap"``. Kept records stay in input order.
    """
    if max_group < 1:
        raise InvalidParameter(f"max_group must be >= 1, got {max_group}")
    report = DedupReport(input_count=len(batch))
    keyed = sorted(range(len(batch)), key=lambda i: batch[i].to_json())

    groups = defaultdict(list)
    for i in keyed:
        r = batch[i]
        groups[(r.dimension, tuple(r.complex.f_vector))].append(i)
    report.fvector_groups = len(groups)

    need_hash = [i for g in groups.values() if len(g) > 1 for i in g]
    if jobs > 1 and len(need_hash) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            digests = dict(zip(need_hash, pool.map(_digest_of, [batch[i] for i in need_hash], chunksize=16)))
    else:
        digests = {i: _digest_of(batch[i]) for i in need_hash}

    removed = {}
    for members in groups.values():
        if len(members) == 1:
            report.wl_subsets += 1
            continue
        subsets = defaultdict(list)
        for i in members:
            subsets[digests[i]].append(i)
        report.wl_subsets += len(subsets)
        for subset in subsets.values():
            if len(subset) == 1:
                continue
            if len(subset) > max_group:
                report.capped_subsets += 1
                for i in subset[1:]:
                    removed[i] = "group cap"
                continue
            reps = []
            for i in subset:
                Ti = batch[i].complex
                for j in reps:
                    report.isomorphism_checks += 1
                    if are_isomorphic(batch[j].complex, Ti):
                        removed[i] = "isomorphic"
                        break
                else:
                    reps.append(i)

    report.removed_isomorphic = sum(1 for r in removed.values() if r == "isomorphic")
    report.removed_group_cap = sum(1 for r in removed.values() if r == "group cap")
    report.removal_reasons = {batch[i].id: r for i, r in removed.items()}
    kept = [r for i, r in enumerate(batch) if i not in removed]
    report.kept_count = len(kept)
    log.info("dedup: %d -> %d (%d isomorphic, %d capped)", len(batch), len(kept),
             report.removed_isomorphic, report.removed_group_cap)
    return kept, report
