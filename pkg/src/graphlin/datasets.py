"""Dataset JSONL serialization.

File layout: one header line with the manifest, then one graph record
per line. The manifest carries schema version, generator, seed, count,
and a content hash so downstream stages can verify their input.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .generators import GraphRecord
from .rng import derive_rng
from .tasks import attach_instances

SCHEMA_VERSION = 1


@dataclass
class Manifest:
    generator: str
    seed: int
    count: int
    schema_version: int = SCHEMA_VERSION
    content_hash: Optional[str] = None

    def to_json(self) -> dict:
        return {"schema_version": self.schema_version, "generator": self.generator,
                "seed": self.seed, "count": self.count,
                "content_hash": self.content_hash}

    @classmethod
    def from_json(cls, obj: dict) -> "Manifest":
        return cls(generator=obj["generator"], seed=obj["seed"],
                   count=obj["count"],
                   schema_version=obj.get("schema_version", SCHEMA_VERSION),
                   content_hash=obj.get("content_hash"))


def finalize_dataset(records: List[GraphRecord], seed: int) -> None:
    """Attach task instances and flag the one-shot exemplar, in place."""
    attach_instances(records, seed)
    rng = derive_rng(seed, "exemplar")
    records[rng.randrange(len(records))].one_shot_exemplar = True


def _records_hash(lines: List[str]) -> str:
    digest = hashlib.sha256()
    for line in lines:
        digest.update(line.encode("utf-8"))
    return digest.hexdigest()


def save_dataset(records: List[GraphRecord], generator: str, seed: int,
                 path: str) -> Manifest:
    lines = [json.dumps(rec.to_json(), separators=(",", ":"))
             for rec in records]
    manifest = Manifest(generator=generator, seed=seed, count=len(records),
                        content_hash=_records_hash(lines))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(manifest.to_json(), separators=(",", ":")) + "\n")
        for line in lines:
            fh.write(line + "\n")
    return manifest


def load_dataset(path: str) -> Tuple[Manifest, List[GraphRecord]]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        manifest = Manifest.from_json(json.loads(header))
        records = [GraphRecord.from_json(json.loads(line))
                   for line in fh if line.strip()]
    if len(records) != manifest.count:
        raise ValueError(
            f"dataset {path}: manifest count {manifest.count} != {len(records)} records")
    return manifest, records
