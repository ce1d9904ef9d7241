"""Run manifests: one JSON record written next to every command's outputs,
capturing the fully resolved configuration and seeds for reproducibility."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

__all__ = ["RunManifest", "write_manifest", "manifest_path"]


@dataclass
class RunManifest:
    command: str
    config: dict
    seeds: dict = field(default_factory=dict)
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    tool_version: str = ""
    duration_s: float = 0.0
    created_utc: str = ""

    def finalize(self, duration_s: float) -> "RunManifest":
        self.duration_s = duration_s
        self.created_utc = datetime.now(timezone.utc).isoformat()
        return self


def manifest_path(primary_output: str) -> str:
    """Manifest location for a command: ``<dir>/manifest.json`` when the
    output is a directory, ``<file>.run.json`` otherwise."""
    if os.path.isdir(primary_output):
        return os.path.join(primary_output, "manifest.json")
    return primary_output + ".run.json"


def write_manifest(manifest: RunManifest, path: str) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
