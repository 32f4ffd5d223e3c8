"""Provenance manifests written next to every adapter output file."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path


@dataclass
class AdapterManifest:
    models: dict[str, str]
    inputs: list[str]
    output: str
    record_count: int
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def to_dict(self) -> dict:
        return {
            "models": dict(self.models),
            "inputs": list(self.inputs),
            "output": self.output,
            "record_count": self.record_count,
            "created_at": self.created_at,
        }

    def write(self, path: Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )


def manifest_path_for(output: Path) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")
