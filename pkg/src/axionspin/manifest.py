"""Run manifests: config hash, seed, and per-stage output checksums.

Re-running a stage with the same configuration and seed must reproduce the
same file checksums; the determinism acceptance test compares manifests of
two independent runs.  Timestamps are recorded for bookkeeping but are not
part of any checksum.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import RunConfig

MANIFEST_NAME = "manifest.json"


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def config_hash(cfg: RunConfig) -> str:
    canonical = json.dumps(cfg.to_dict(), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class RunManifest:
    config_sha256: str
    seed: int
    tool_version: str
    amplitude_scale: float
    defaulted_fields: list[str]
    stages: dict = field(default_factory=dict)

    @classmethod
    def for_run(cls, cfg: RunConfig, defaulted: list[str]) -> "RunManifest":
        return cls(config_sha256=config_hash(cfg), seed=cfg.seed,
                   tool_version=__version__,
                   amplitude_scale=cfg.amplitude_scale,
                   defaulted_fields=list(defaulted))

    def record_stage(self, name: str, files: dict[str, Path]) -> None:
        self.stages[name] = {
            "completed_at": datetime.now(timezone.utc).isoformat(),
            "files": {key: {"path": Path(p).name, "sha256": sha256_file(p)}
                      for key, p in files.items()},
        }

    def checksums(self) -> dict[str, str]:
        """Flat {stage/key: sha256} view for reproducibility comparisons."""
        return {f"{stage}/{key}": entry["sha256"]
                for stage, data in self.stages.items()
                for key, entry in data["files"].items()}

    def save(self, out_dir) -> Path:
        path = Path(out_dir) / MANIFEST_NAME
        payload = {
            "config_sha256": self.config_sha256,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "amplitude_scale": self.amplitude_scale,
            "defaulted_fields": self.defaulted_fields,
            "stages": self.stages,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return path

    @classmethod
    def load(cls, out_dir) -> "RunManifest":
        with open(Path(out_dir) / MANIFEST_NAME) as fh:
            payload = json.load(fh)
        manifest = cls(config_sha256=payload["config_sha256"],
                       seed=payload["seed"],
                       tool_version=payload["tool_version"],
                       amplitude_scale=payload["amplitude_scale"],
                       defaulted_fields=payload["defaulted_fields"])
        manifest.stages = payload["stages"]
        return manifest
