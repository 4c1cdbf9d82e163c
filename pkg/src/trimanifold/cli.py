"""Command-line interface.

Records are read and written as JSONL (see :mod:`trimanifold.records`);
``-`` means stdin/stdout. Exit status: 0 success, 1 validation failure,
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from .complex import SurfaceClass, classify_surface, invariants, is_combinatorial_manifold, minimal_triangulation
from .errors import (
    InvalidParameter,
    ParseError,
    TargetUnreachable,
    TriangulationError,
    UnsupportedDimension,
    ValidationError,
)
from .isomorphism import DEFAULT_MAX_GROUP, deduplicate
from .moves import random_pachner_walk
from ._rng import derive_rng, derive_seed
from .pipeline import (
    GRID_2D_UNBALANCED,
    GRID_BALANCED,
    MAX_VERTICES,
    SPLIT_RATIOS,
    BalanceConfig,
    balance_dataset,
    dataset_stats,
    ec_baseline,
    export_graph,
    label_2d,
    make_eval_variants,
    split_dataset,
    validate_record,
)
from .records import DatasetRecord, Provenance, parse, serialize
from .subdivision import SubdivisionScheme
from .surgery import build_surface, connected_sum

log = logging.getLogger("trimanifold")

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str, validate: bool = True) -> list[DatasetRecord]:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return parse(data, validate=validate)


def _write_bytes(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _write_records(args, records) -> None:
    _write_bytes(args.output, serialize(records))


def _write_json_lines(args, objs) -> None:
    _write_bytes(args.output, "".join(json.dumps(o) + "\n" for o in objs).encode())


def _cap(args, dim: int) -> int:
    return args.max_vertices if args.max_vertices is not None else MAX_VERTICES[dim]


def cmd_validate(args) -> int:
    records = _read(args.input, validate=False)
    bad = 0
    for r in records:
        problem = validate_record(r)
        if problem:
            bad += 1
            print(f"{r.id}: {problem}", file=sys.stderr)
    print(json.dumps({"records": len(records), "invalid": bad}))
    return EXIT_INVALID if bad else EXIT_OK


def cmd_invariants(args) -> int:
    out = []
    for r in _read(args.input):
        row = {"id": r.id}
        row.update(invariants(r.complex).as_dict())
        out.append(row)
    _write_json_lines(args, out)
    return EXIT_OK


def cmd_classify(args) -> int:
    records = _read(args.input)
    if args.write_labels:
        _write_records(args, [
            DatasetRecord(r.id, r.dimension, r.top_faces, label_2d(r.complex), r.provenance, r.split)
            for r in records
        ])
        return EXIT_OK
    out = []
    for r in records:
        sc = classify_surface(r.complex)
        out.append({"id": r.id, "class": sc.canonical_name, "orientable": sc.orientable,
                    "genus_or_crosscaps": sc.genus_or_crosscaps, "stored_label": r.label})
    _write_json_lines(args, out)
    return EXIT_OK


def cmd_pachner_walk(args) -> int:
    out = []
    for r in _read(args.input):
        steps = args.steps if args.steps is not None else 2 * len(r.top_faces)
        seed = derive_seed(args.seed, "walk", r.id)
        T = random_pachner_walk(r.complex, steps, _cap(args, r.dimension), seed)
        label = label_2d(T) if r.dimension == 2 else r.label
        out.append(DatasetRecord.from_complex(f"{r.id}/walk", T, label, Provenance("pachner", r.id, seed)))
    _write_records(args, out)
    return EXIT_OK


def _piece(spec: str):
    if spec in ("S2", "T2", "RP2"):
        return spec, minimal_triangulation(spec)
    (rec, *_) = _read(spec)
    return rec.id, rec.complex


def cmd_consum(args) -> int:
    if args.surface:
        sc = SurfaceClass.from_name(args.surface)
        seed = derive_seed(args.seed, "build", args.surface)
        T = build_surface(sc.orientable, sc.genus_or_crosscaps, seed)
        _write_records(args, [DatasetRecord.from_complex(args.surface, T, label_2d(T), Provenance("connected_sum", None, seed))])
        return EXIT_OK
    piece_id, piece = _piece(args.piece)
    out = []
    for r in _read(args.input):
        seed = derive_seed(args.seed, "consum", r.id)
        rng = derive_rng(seed)
        T = connected_sum(r.complex, piece, rng.choice(r.complex.facets), rng.choice(piece.facets))
        out.append(DatasetRecord.from_complex(f"{r.id}#{piece_id}", T, label_2d(T), Provenance("connected_sum", r.id, seed)))
    _write_records(args, out)
    return EXIT_OK


def cmd_subdivide(args) -> int:
    scheme = SubdivisionScheme.parse(args.scheme)
    out = []
    for r in _read(args.input):
        seed = derive_seed(args.seed, scheme.name, r.id)
        T = scheme.apply(r.complex, seed)
        out.append(DatasetRecord.from_complex(f"{r.id}/{scheme.name}", T, r.label, Provenance("subdivision", r.id, seed)))
    _write_records(args, out)
    return EXIT_OK


def cmd_dedup(args) -> int:
    kept, report = deduplicate(_read(args.input), args.max_group, args.jobs)
    _write_records(args, kept)
    print(report.to_json(), file=sys.stderr)
    return EXIT_OK


def cmd_balance(args) -> int:
    seeds = _read(args.input)
    dim = seeds[0].dimension if seeds else 2
    cfg = BalanceConfig(
        target=args.target,
        cap=args.cap,
        max_vertices=_cap(args, dim),
        max_group=args.max_group,
        rounds=args.rounds,
        classes=tuple(args.classes or ()),
        walk_steps=args.walk_steps,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TargetUnreachable)
        records = balance_dataset(seeds, cfg, args.seed, args.jobs)
    for w in caught:
        if issubclass(w.category, TargetUnreachable):
            print(json.dumps({"shortfall": w.message.shortfall}), file=sys.stderr)
    _write_records(args, records)
    return EXIT_OK


def cmd_variants(args) -> int:
    if args.output == "-":
        raise UsageError("variants writes one file per scheme; --output must be a directory")
    records = _read(args.input)
    which = args.scheme or (GRID_2D_UNBALANCED if args.grid == "2d-unbalanced" else GRID_BALANCED)
    variants = make_eval_variants(records, which, args.per_class, args.seed)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, recs in variants.items():
        (outdir / f"{name}.jsonl").write_bytes(serialize(recs))
    print(json.dumps({name: len(recs) for name, recs in variants.items()}))
    return EXIT_OK


def _ratios(text: str):
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratios {text!r}") from None
    return vals


def cmd_split(args) -> int:
    records = split_dataset(_read(args.input), args.ratios, args.seed, args.stratify)
    _write_records(args, records)
    return EXIT_OK


def cmd_ec_baseline(args) -> int:
    if args.train:
        train = _read(args.train)
        evaluation = _read(args.eval) if args.eval else _read(args.input)
    else:
        records = _read(args.input)
        train = [r for r in records if r.split == "train"]
        evaluation = [r for r in records if r.split == args.eval_split]
    acc = ec_baseline(train, evaluation, args.ec_mode)
    print(json.dumps({"mode": args.ec_mode, "train": len(train), "eval": len(evaluation), "balanced_accuracy": acc}))
    return EXIT_OK


def cmd_export_graph(args) -> int:
    out = [
        export_graph(r, args.repr, args.encode, args.directed, args.seed)
        for r in _read(args.input)
    ]
    _write_json_lines(args, out)
    return EXIT_OK


def cmd_stats(args) -> int:
    records = _read(args.input)
    stats = dataset_stats(records)
    stats["manifolds"] = sum(1 for r in records if is_combinatorial_manifold(r.complex))
    print(json.dumps(stats, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--max-vertices", type=int, default=None,
                        help="vertex cap (default 24 for surfaces, 40 for 3-manifolds)")
    common.add_argument("-i", "--input", default="-", help="input JSONL, '-' for stdin")
    common.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="trimanifold", description="Build, check and augment datasets of triangulated 2- and 3-manifolds.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check manifold property and 2D labels")
    add("invariants", cmd_invariants, "f-vector, Euler characteristic, orientability, mod-2 Betti numbers")
    sp = add("classify", cmd_classify, "classify surfaces")
    sp.add_argument("--write-labels", action="store_true", help="emit records with recomputed labels")
    sp = add("pachner-walk", cmd_pachner_walk, "random Pachner walk from every record")
    sp.add_argument("--steps", type=int, default=None, help="moves per record (default 2 x facets)")
    sp = add("consum", cmd_consum, "connected sums of surfaces")
    sp.add_argument("--piece", default="T2", help="S2, T2, RP2, or a JSONL file whose first record is glued on")
    sp.add_argument("--surface", default=None, help="build this surface (e.g. T2#3, RP2#2) instead of reading input")
    sp = add("subdivide", cmd_subdivide, "stellar or barycentric subdivision")
    sp.add_argument("--scheme", required=True, help="stellar, graded-N, top-P or barycentric")
    sp = add("dedup", cmd_dedup, "remove isomorphic duplicates")
    sp.add_argument("--max-group", type=int, default=DEFAULT_MAX_GROUP)
    sp = add("balance", cmd_balance, "grow classes to a target size")
    sp.add_argument("--target", type=int, default=2500)
    sp.add_argument("--cap", type=int, default=None, help="per-class upper bound (default: target)")
    sp.add_argument("--rounds", type=int, default=5)
    sp.add_argument("--max-group", type=int, default=DEFAULT_MAX_GROUP)
    sp.add_argument("--walk-steps", type=int, default=None)
    sp.add_argument("--classes", nargs="*", help="extra surface classes to create, e.g. T2#2 RP2#3")
    sp = add("variants", cmd_variants, "subdivided evaluation datasets (one file per scheme)")
    sp.add_argument("--grid", choices=("2d-unbalanced", "balanced"), default="2d-unbalanced")
    sp.add_argument("--scheme", action="append", help="explicit scheme, repeatable; overrides --grid")
    sp.add_argument("--per-class", type=int, default=100)
    sp = add("split", cmd_split, "random train/val/test assignment")
    sp.add_argument("--ratios", type=_ratios, default=SPLIT_RATIOS)
    sp.add_argument("--stratify", action="store_true")
    sp = add("ec-baseline", cmd_ec_baseline, "Euler-characteristic majority baseline")
    sp.add_argument("--ec-mode", choices=("chi", "chi+orient"), default="chi+orient")
    sp.add_argument("--train", default=None, help="training records (default: split=train rows of --input)")
    sp.add_argument("--eval", default=None)
    sp.add_argument("--eval-split", default="test", choices=("train", "val", "test"))
    sp = add("export-graph", cmd_export_graph, "graph representation plus node features")
    sp.add_argument("--repr", choices=("skeleton", "dual", "hasse"), default="skeleton")
    sp.add_argument("--encode", choices=("r", "d", "rwpe", "mc"), default="d")
    sp.add_argument("--directed", action="store_true", help="keep Hasse edge direction")
    add("stats", cmd_stats, "class counts and size summary")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, InvalidParameter, UnsupportedDimension) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TriangulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
