"""Reproducibility record written next to every CLI output file"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from config import SCHEMA_VERSION, TOOL_VERSION

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


@dataclass
class RunManifest:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    config_path: Optional[str] = None
    output: Optional[str] = None
    seed: Optional[int] = None
    argv: list[str] = field(default_factory=list)
    tool_version: str = TOOL_VERSION
    schema_version: int = SCHEMA_VERSION
    wall_clock_seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def manifest_path(output: Path) -> Path:
    """t.trc -> t.trc.manifest.json"""
    return output.with_name(output.name + MANIFEST_SUFFIX)


def write_manifest(manifest: RunManifest, output: Path) -> Path:
    path = manifest_path(output)
    path.write_text(manifest.to_json(), encoding="utf-8")
    logger.debug(f"Wrote manifest {path}")
    return path
