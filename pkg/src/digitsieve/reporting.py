"""Report records, manifests and writers shared by the CLI.

A run produces one JSON or CSV file of records plus a manifest carrying
{version, seed, config hash}.  The config hash covers the resolved
experiment parameters (not the output location), so identical runs are
identifiable across directories.  The elapsed_ms field is the only part
of a record that may differ between identical runs.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

SCHEMA_VERSION = 1
TIMING_FIELD = "elapsed_ms"


def config_hash(config: Mapping[str, Any]) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def make_manifest(version: str, seed: int, cfg_hash: str) -> dict:
    return {"schema": SCHEMA_VERSION, "version": version, "seed": seed, "config_hash": cfg_hash}


class Stopwatch:
    """Elapsed milliseconds since construction."""

    def __init__(self) -> None:
        self._t0 = time.perf_counter()

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self._t0) * 1000.0


def write_json_report(path: Path, manifest: Mapping[str, Any], records: Sequence[Mapping[str, Any]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"manifest": dict(manifest), "records": [dict(r) for r in records]}
    path.write_text(json.dumps(payload, indent=2) + "\n")


def write_csv_report(path: Path, fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(fieldnames))
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def write_manifest(path: Path, manifest: Mapping[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(dict(manifest), indent=2) + "\n")


def strip_timing(obj: Any) -> Any:
    """Recursively drop timing fields; used by determinism comparisons."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != TIMING_FIELD}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj
