"""Dataset assembly: labelling, class balancing, evaluation variants, splits and the
Euler-characteristic baseline."""
from __future__ import annotations

import logging
import math
import re
import warnings
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._rng import derive_rng, derive_seed
from .complex import (
    SimplicialComplex,
    SurfaceClass,
    classify_surface,
    is_combinatorial_manifold,
    is_orientable,
    minimal_triangulation,
)
from .errors import EmptyTrain, InvalidParameter, TargetUnreachable, TriangulationError
from .isomorphism import DEFAULT_MAX_GROUP, deduplicate
from .moves import random_pachner_walk
from .records import DatasetRecord, Provenance
from .represent import REPRESENTATIONS, encode
from .subdivision import SchemeKind, SubdivisionScheme
from .surgery import build_surface, connected_sum

log = logging.getLogger(__name__)

MAX_VERTICES = {2: 24, 3: 40}
MIN_CLASS_SIZE = 100
VARIANT_SAMPLES_PER_CLASS = 100
SPLIT_RATIOS = (0.6, 0.2, 0.2)

GRID_2D_UNBALANCED = ("graded-16", "graded-17", "graded-18", "graded-19", "graded-20",
                      "top-0.75", "top-1", "barycentric")
GRID_BALANCED = ("top-0.75", "top-1", "barycentric")


def label_2d(T: SimplicialComplex) -> str:
    return classify_surface(T).canonical_name


def filter_min_class_size(records: Sequence[DatasetRecord], min_size: int = MIN_CLASS_SIZE) -> list[DatasetRecord]:
    """Drop every record whose class has fewer than ``min_size`` members."""
    if min_size < 1:
        raise InvalidParameter(f"min_size must be >= 1, got {min_size}")
    counts = Counter(r.label for r in records)
    return [r for r in records if counts[r.label] >= min_size]


def validate_record(rec: DatasetRecord) -> str | None:
    """Return a problem description, or None if the record is sound."""
    try:
        T = rec.complex
        if not is_combinatorial_manifold(T):
            return "not a combinatorial manifold"
        if rec.dimension == 2 and label_2d(T) != rec.label:
            return f"label {rec.label!r} but the surface is {label_2d(T)}"
    except TriangulationError as exc:
        return str(exc)
    return None


# -- balancing --------------------------------------------------------------

@dataclass
class BalanceConfig:
    """Class-balancing parameters.

    ``target`` applies to every class unless overridden in ``targets``;
    classes end with at most ``cap`` members (default: the target).
    ``classes`` lists extra 2D labels to create by connected sums when the
    seeds do not contain them. ``walk_steps=None`` walks ``2 * #facets``
    moves from the parent.
    """

    target: int = 2500
    targets: dict = field(default_factory=dict)
    cap: int | None = None
    max_vertices: int = 24
    max_group: int = DEFAULT_MAX_GROUP
    rounds: int = 5
    classes: tuple = ()
    walk_steps: int | None = None
    oversample: float = 1.25

    def __post_init__(self):
        if self.target < 1 or any(t < 1 for t in self.targets.values()):
            raise InvalidParameter("targets must be >= 1")
        if self.rounds < 1:
            raise InvalidParameter("rounds must be >= 1")
        if self.max_group < 1:
            raise InvalidParameter("max_group must be >= 1")

    def target_for(self, label: str) -> int:
        return self.targets.get(label, self.target)

    def cap_for(self, label: str) -> int:
        if self.cap is not None:
            return max(self.cap, self.target_for(label))
        return self.target_for(label)


REFERENCE_BALANCE_2D = BalanceConfig(target=2500, max_vertices=24)
REFERENCE_BALANCE_3D = BalanceConfig(target=5000, max_vertices=40)


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_") or "class"


def _walk_job(args):
    parent, steps, max_vertices, seed, rid, dimension = args
    T = random_pachner_walk(parent.complex, steps, max_vertices, seed)
    label = label_2d(T) if dimension == 2 else parent.label
    if dimension == 2 and label != parent.label:
        raise AssertionError(f"walk changed the class of {parent.id}: {parent.label} -> {label}")
    return DatasetRecord.from_complex(rid, T, label, Provenance("pachner", parent.id, seed))


def _founder_options(sc: SurfaceClass):
    """(parent label, glued piece) pairs that produce class ``sc`` by one connected sum."""
    n = sc.genus_or_crosscaps
    if sc.orientable:
        return [("S2" if n == 1 else f"T2#{n - 1}", "T2")]
    opts = [("S2" if n == 1 else f"RP2#{n - 1}", "RP2")]
    if n % 2 == 1 and n >= 3:
        opts.append((f"T2#{(n - 1) // 2}", "RP2"))
    return opts


def _found_classes(by_class, missing, cfg: BalanceConfig, master_seed) -> list[DatasetRecord]:
    founders = []
    ordered = sorted(missing, key=lambda c: (-SurfaceClass.from_name(c).euler_characteristic, c))
    for label in ordered:
        sc = SurfaceClass.from_name(label)
        rng = derive_rng(master_seed, "found", label)
        rec = None
        for parent_label, piece_name in _founder_options(sc):
            piece = minimal_triangulation(piece_name)
            extra = piece.vertex_count - 3
            pool = [r for r in by_class.get(parent_label, []) if r.vertex_count + extra <= cfg.max_vertices]
            if pool:
                parent = rng.choice(sorted(pool, key=lambda r: r.id))
                T = connected_sum(parent.complex, piece, rng.choice(parent.complex.facets), rng.choice(piece.facets))
                seed = derive_seed(master_seed, "found", label)
                rec = DatasetRecord.from_complex(f"{_slug(label)}-cs-0", T, label_2d(T), Provenance("connected_sum", parent.id, seed))
                break
        if rec is None:
            seed = derive_seed(master_seed, "build", label)
            T = build_surface(sc.orientable, sc.genus_or_crosscaps, seed)
            if T.vertex_count <= cfg.max_vertices:
                rec = DatasetRecord.from_complex(f"{_slug(label)}-cs-0", T, label_2d(T), Provenance("connected_sum", None, seed))
        if rec is None:
            log.warning("cannot build class %s within %d vertices", label, cfg.max_vertices)
            continue
        assert rec.label == label, (rec.label, label)
        founders.append(rec)
        by_class.setdefault(label, []).append(rec)
    return founders


def balance_dataset(seeds: Sequence[DatasetRecord], cfg: BalanceConfig, master_seed: int = 0, jobs: int = 1) -> list[DatasetRecord]:
    """Grow every class to its target with random Pachner walks, deduplicating between rounds.

    Records above ``cfg.max_vertices`` are dropped first. Generated 2D labels
    are recomputed from the triangulation; 3D labels are inherited from the
    walk's parent. Emits a :class:`TargetUnreachable` warning with the
    per-class shortfall if rounds run out.
    """
    if not seeds:
        raise InvalidParameter("no seed records")
    dims = {r.dimension for r in seeds}
    if len(dims) != 1:
        raise InvalidParameter(f"seed records mix dimensions {sorted(dims)}")
    (dim,) = dims
    records = [r for r in seeds if r.vertex_count <= cfg.max_vertices]
    if len(records) < len(seeds):
        log.info("dropped %d seed records above %d vertices", len(seeds) - len(records), cfg.max_vertices)
    records, _ = deduplicate(records, cfg.max_group, jobs)

    by_class = defaultdict(list)
    for r in records:
        by_class[r.label].append(r)
    missing = [c for c in cfg.classes if c not in by_class]
    if missing:
        if dim != 2:
            raise InvalidParameter("new classes can only be created for surfaces")
        records.extend(_found_classes(by_class, missing, cfg, master_seed))
    labels = sorted(by_class)

    for rnd in range(cfg.rounds):
        by_class = defaultdict(list)
        for r in records:
            by_class[r.label].append(r)
        deficits = {c: cfg.target_for(c) - len(by_class[c]) for c in labels}
        deficits = {c: n for c, n in deficits.items() if n > 0}
        if not deficits:
            break
        jobs_list = []
        for c, deficit in sorted(deficits.items()):
            rng = derive_rng(master_seed, "balance", rnd, c)
            members = sorted(by_class[c], key=lambda r: r.id)
            for j in range(math.ceil(deficit * cfg.oversample)):
                parent = rng.choice(members)
                rid = f"{_slug(c)}-r{rnd}-{j:05d}"
                steps = cfg.walk_steps if cfg.walk_steps is not None else 2 * len(parent.top_faces)
                jobs_list.append((parent, steps, cfg.max_vertices, derive_seed(master_seed, "walk", rid), rid, dim))
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                new = list(pool.map(_walk_job, jobs_list, chunksize=8))
        else:
            new = [_walk_job(a) for a in jobs_list]
        records, report = deduplicate(records + new, cfg.max_group, jobs)
        log.info("round %d: generated %d, %s", rnd, len(new), report.to_json())

    by_class = defaultdict(list)
    for r in records:
        by_class[r.label].append(r)
    out = []
    for c in labels:
        out.extend(by_class[c][: cfg.cap_for(c)])
    shortfall = {c: cfg.target_for(c) - len(by_class[c]) for c in labels if len(by_class[c]) < cfg.target_for(c)}
    if shortfall:
        warnings.warn(TargetUnreachable(shortfall), stacklevel=2)
    return out


# -- evaluation variants ---------------------------------------------------

def _scheme(s) -> SubdivisionScheme:
    return s if isinstance(s, SubdivisionScheme) else SubdivisionScheme.parse(s)


def make_eval_variants(records: Sequence[DatasetRecord], which: Iterable = GRID_2D_UNBALANCED, per_class: int = VARIANT_SAMPLES_PER_CLASS, seed: int = 0) -> dict[str, list[DatasetRecord]]:
    """Subdivided copies of up to ``per_class`` records per class, one dataset per scheme.

    Barycentric variants take the largest records (vertex count, then facet
    count); the others sample uniformly. An ``n``-graded variant only draws
    from records with fewer than ``n`` vertices and is skipped when there
    are none. Labels are copied from the source record.
    """
    if per_class < 1:
        raise InvalidParameter(f"per_class must be >= 1, got {per_class}")
    by_class = defaultdict(list)
    for r in records:
        by_class[r.label].append(r)
    variants = {}
    for scheme in map(_scheme, which):
        picked = []
        for label in sorted(by_class):
            members = sorted(by_class[label], key=lambda r: r.id)
            if scheme.kind is SchemeKind.GRADED_STELLAR:
                members = [r for r in members if r.vertex_count < scheme.target_vertices]
            if scheme.kind is SchemeKind.BARYCENTRIC:
                members.sort(key=lambda r: (-r.vertex_count, -len(r.top_faces), r.id))
                picked.extend(members[:per_class])
            elif len(members) <= per_class:
                picked.extend(members)
            else:
                picked.extend(derive_rng(seed, "variant", scheme.name, label).sample(members, per_class))
        if not picked:
            log.warning("variant %s skipped: no eligible records", scheme.name)
            continue
        out = []
        for r in picked:
            s = derive_seed(seed, scheme.name, r.id)
            T = scheme.apply(r.complex, s)
            out.append(DatasetRecord.from_complex(f"{r.id}/{scheme.name}", T, r.label, Provenance("subdivision", r.id, s)))
        variants[scheme.name] = out
    return variants


# -- splits -----------------------------------------------------------------

def _largest_remainder(total: int, ratios: Sequence[float]) -> list[int]:
    raw = [total * r for r in ratios]
    counts = [math.floor(x + 1e-9) for x in raw]
    order = sorted(range(len(ratios)), key=lambda i: (-(raw[i] - counts[i]), i))
    for i in order[: total - sum(counts)]:
        counts[i] += 1
    return counts


def split_dataset(records: Sequence[DatasetRecord], ratios: Sequence[float] = SPLIT_RATIOS, seed: int = 0, stratify: bool = False) -> list[DatasetRecord]:
    """Tag records train/val/test at random; sizes by largest-remainder rounding.

    Output keeps the input order.
    """
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1) > 1e-9:
        raise InvalidParameter(f"ratios must be three non-negative numbers summing to 1, got {ratios}")
    tags = [None] * len(records)
    if stratify:
        strata = defaultdict(list)
        for i, r in enumerate(records):
            strata[r.label].append(i)
        groups = [strata[k] for k in sorted(strata)]
    else:
        groups = [list(range(len(records)))]
    for gi, idx in enumerate(groups):
        rng = derive_rng(seed, "split", gi if stratify else "all")
        idx = list(idx)
        rng.shuffle(idx)
        n_train, n_val, _ = _largest_remainder(len(idx), ratios)
        for pos, i in enumerate(idx):
            tags[i] = "train" if pos < n_train else "val" if pos < n_train + n_val else "test"
    return [r.with_split(t) for r, t in zip(records, tags)]


# -- Euler characteristic baseline ----------------------------------------

def _ec_key(rec: DatasetRecord, mode: str):
    T = rec.complex
    if mode == "chi":
        return (T.euler_characteristic,)
    return (T.euler_characteristic, is_orientable(T))


def _majority(counter: Counter) -> str:
    best = max(counter.values())
    return min(label for label, n in counter.items() if n == best)


def balanced_accuracy(y_true: Sequence[str], y_pred: Sequence[str]) -> float:
    """Mean per-class recall over the classes present in ``y_true``."""
    hits = Counter()
    totals = Counter(y_true)
    for t, p in zip(y_true, y_pred):
        if t == p:
            hits[t] += 1
    return sum(hits[c] / totals[c] for c in totals) / len(totals)


def ec_baseline(train: Sequence[DatasetRecord], eval: Sequence[DatasetRecord], mode: str = "chi+orient") -> float:
    """Balanced accuracy of predicting the majority training label per Euler-characteristic bucket.

    ``mode="chi+orient"`` buckets by (chi, orientability), ``"chi"`` by chi
    alone. Unseen buckets get the global majority label; ties go to the
    lexicographically smallest label.
    """
    if mode not in ("chi", "chi+orient"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    if not train:
        raise EmptyTrain("training set is empty")
    if not eval:
        raise InvalidParameter("evaluation set is empty")
    buckets = defaultdict(Counter)
    for r in train:
        buckets[_ec_key(r, mode)][r.label] += 1
    fallback = _majority(Counter(r.label for r in train))
    rule = {k: _majority(c) for k, c in buckets.items()}
    preds = [rule.get(_ec_key(r, mode), fallback) for r in eval]
    return balanced_accuracy([r.label for r in eval], preds)


# -- exports and summaries ---------------------------------------------------

def export_graph(rec: DatasetRecord, representation: str = "skeleton", encoding: str = "d", directed: bool = False, seed: int = 0) -> dict:
    """One JSON-ready object: graph structure plus a feature matrix."""
    build = REPRESENTATIONS[representation]
    G = build(rec.complex, directed=directed) if representation == "hasse" else build(rec.complex)
    feats = encode(G, encoding, manifold_dim=rec.dimension, seed=derive_seed(seed, "features", rec.id))
    out = {"id": rec.id, "label": rec.label}
    out.update(G.to_dict())
    out["encoding"] = feats.encoding.value
    out["features"] = feats.values.tolist()
    return out


def dataset_stats(records: Sequence[DatasetRecord]) -> dict:
    counts = Counter(r.label for r in records)
    nv = [r.vertex_count for r in records]
    return {
        "records": len(records),
        "dimensions": sorted({r.dimension for r in records}),
        "classes": dict(sorted(counts.items())),
        "vertices": {"min": min(nv), "max": max(nv)} if nv else None,
        "splits": dict(sorted(Counter(str(r.split) for r in records).items())),
        "provenance": dict(sorted(Counter(r.provenance.kind for r in records).items())),
    }
