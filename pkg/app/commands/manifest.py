import hashlib
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, Field

from app import __version__
from app.io import clean, read_json, write_json

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"

Writer = Callable[[Path], Any]


class RunManifest(BaseModel):
    subcommand: str
    parameters: Dict[str, Any]
    input_digests: Dict[str, str] = Field(default_factory=dict)
    seed: Optional[int] = None
    outputs: List[str] = Field(default_factory=list)
    tool_version: str = __version__


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def digests(paths: List[Optional[str]]) -> Dict[str, str]:
    return {p: sha256_file(p) for p in paths if p}


def emit(out_dir: str | Path, writers: Dict[str, Writer], manifest: RunManifest) -> Path:
    """Write every artefact, then the manifest.

    Callers compute everything before calling this, so a failed run leaves no
    directory behind.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, write in writers.items():
        write(out / name)
        logger.info("wrote %s", out / name)
    final = manifest.model_copy(update={"outputs": list(writers)})
    write_json(out / MANIFEST_NAME, clean(final.model_dump(mode="json")))
    return out


def load_manifest(path: str | Path) -> RunManifest:
    return RunManifest.model_validate(read_json(path))
