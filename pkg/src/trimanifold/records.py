"""Dataset records and their line-delimited JSON format.

One record per line, keys in this order::

    {"id": ..., "dimension": 2, "top_faces": [[0,1,2], ...], "label": "S2",
     "provenance": {"kind": "census", "parent": null, "seed": null}, "split": null}
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .complex import SimplicialComplex, is_combinatorial_manifold
from .errors import ParseError, UnsupportedDimension, ValidationError

PROVENANCE_KINDS = ("census", "pachner", "connected_sum", "subdivision")
SPLITS = ("train", "val", "test")
RECORD_KEYS = ("id", "dimension", "top_faces", "label", "provenance", "split")
PROVENANCE_KEYS = ("kind", "parent", "seed")


@dataclass(frozen=True)
class Provenance:
    kind: str = "census"
    parent: str | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in PROVENANCE_KINDS:
            raise ValueError(f"unknown provenance kind {self.kind!r}")


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    dimension: int
    top_faces: tuple[tuple[int, ...], ...]
    label: str
    provenance: Provenance = Provenance()
    split: str | None = None

    @classmethod
    def from_complex(cls, id: str, T: SimplicialComplex, label: str, provenance: Provenance = Provenance(), split=None) -> DatasetRecord:
        rec = cls(id, T.dimension, T.facets, label, provenance, split)
        rec.__dict__["complex"] = T
        return rec

    @cached_property
    def complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_top_faces(self.top_faces, self.dimension)

    @property
    def vertex_count(self) -> int:
        return self.complex.vertex_count

    def with_split(self, split: str | None) -> DatasetRecord:
        if split is not None and split not in SPLITS:
            raise ValueError(f"unknown split {split!r}")
        out = replace(self, split=split)
        if "complex" in self.__dict__:
            out.__dict__["complex"] = self.__dict__["complex"]
        return out

    def to_json(self) -> str:
        payload = {
            "id": self.id,
            "dimension": self.dimension,
            "top_faces": [list(f) for f in self.top_faces],
            "label": self.label,
            "provenance": {
                "kind": self.provenance.kind,
                "parent": self.provenance.parent,
                "seed": self.provenance.seed,
            },
            "split": self.split,
        }
        return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def serialize(records: Iterable[DatasetRecord]) -> bytes:
    return "".join(r.to_json() + "\n" for r in records).encode("utf-8")


def _record_from_obj(obj, line: int) -> DatasetRecord:
    if not isinstance(obj, dict) or set(obj) != set(RECORD_KEYS):
        raise ParseError(f"expected keys {list(RECORD_KEYS)}", line)
    rid, dim, faces, label = obj["id"], obj["dimension"], obj["top_faces"], obj["label"]
    if not isinstance(rid, str):
        raise ParseError("id must be a string", line)
    if type(dim) is not int or dim not in (2, 3):
        raise ParseError(f"dimension must be 2 or 3, got {dim!r}", line)
    if not isinstance(faces, list) or not faces:
        raise ParseError("top_faces must be a non-empty array", line)
    out_faces = []
    for f in faces:
        if not isinstance(f, list) or len(f) != dim + 1 or any(type(v) is not int or v < 0 for v in f):
            raise ParseError(f"face {f!r} is not {dim + 1} non-negative integers", line)
        if any(a >= b for a, b in zip(f, f[1:])):
            raise ParseError(f"face {f!r} is not strictly ascending", line)
        out_faces.append(tuple(f))
    if not isinstance(label, str):
        raise ParseError("label must be a string", line)
    prov = obj["provenance"]
    if not isinstance(prov, dict) or set(prov) != set(PROVENANCE_KEYS):
        raise ParseError(f"provenance needs keys {list(PROVENANCE_KEYS)}", line)
    if prov["kind"] not in PROVENANCE_KINDS:
        raise ParseError(f"unknown provenance kind {prov['kind']!r}", line)
    if prov["parent"] is not None and not isinstance(prov["parent"], str):
        raise ParseError("provenance.parent must be a string or null", line)
    if prov["seed"] is not None and type(prov["seed"]) is not int:
        raise ParseError("provenance.seed must be an integer or null", line)
    split = obj["split"]
    if split is not None and split not in SPLITS:
        raise ParseError(f"split must be one of {SPLITS} or null", line)
    return DatasetRecord(rid, dim, tuple(out_faces), label, Provenance(prov["kind"], prov["parent"], prov["seed"]), split)


def parse(data: bytes | str, validate: bool = True) -> list[DatasetRecord]:
    """Parse JSONL records. With ``validate``, every record must be a combinatorial manifold."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    records = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", lineno) from None
        rec = _record_from_obj(obj, lineno)
        if validate:
            try:
                ok = is_combinatorial_manifold(rec.complex)
            except UnsupportedDimension as exc:
                raise ValidationError(str(exc), lineno, rec.id) from None
            if not ok:
                raise ValidationError(f"record {rec.id!r} is not a combinatorial manifold", lineno, rec.id)
        records.append(rec)
    return records


def read_records(path, validate: bool = True) -> list[DatasetRecord]:
    return parse(Path(path).read_bytes(), validate=validate)


def write_records(path, records: Iterable[DatasetRecord]) -> None:
    Path(path).write_bytes(serialize(records))
