import hashlib
import logging
from datetime import UTC, datetime
from pathlib import Path

from pydantic import BaseModel

from neurashed.errors import OutputDirNotEmpty
from neurashed.reporting.tables import write_atomic

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class OutputFile(BaseModel):
    path: str
    sha256: str


class RunManifest(BaseModel):
    command: list[str]
    version: str
    input_hashes: dict[str, str] = {}
    seeds: list[int] = []
    started_at: str
    finished_at: str = ""
    outputs: list[OutputFile] = []


def now_iso() -> str:
    return datetime.now(tz=UTC).isoformat()


def file_sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def prepare_output_dir(*, out_dir: Path, force: bool) -> None:
    """Create ``out_dir``; refuse a non-empty one unless ``force``."""
    if out_dir.exists() and not out_dir.is_dir():
        raise OutputDirNotEmpty(f"{out_dir} exists and is not a directory")
    if out_dir.is_dir() and any(out_dir.iterdir()) and not force:
        raise OutputDirNotEmpty(f"{out_dir} is not empty (use --force to overwrite)")
    out_dir.mkdir(parents=True, exist_ok=True)


def write_manifest(*, out_dir: Path, manifest: RunManifest, outputs: list[Path]) -> Path:
    """Hash ``outputs`` into the manifest and write it last, atomically."""
    manifest = manifest.model_copy(
        update={
            "finished_at": now_iso(),
            "outputs": [
                OutputFile(path=p.relative_to(out_dir).as_posix(), sha256=file_sha256(p))
                for p in sorted(outputs)
            ],
        }
    )
    path = out_dir / MANIFEST_NAME
    write_atomic(path=path, data=manifest.model_dump_json(indent=2) + "\n")
    logger.info(f"Wrote manifest with {len(outputs)} outputs to {path}")
    return path


def load_manifest(*, out_dir: Path) -> RunManifest:
    return RunManifest.model_validate_json((out_dir / MANIFEST_NAME).read_text(encoding="utf-8"))


def verify_manifest(*, out_dir: Path) -> list[str]:
    """Listed outputs that are missing or whose hash no longer matches."""
    manifest = load_manifest(out_dir=out_dir)
    bad = []
    for output in manifest.outputs:
        path = out_dir / output.path
        if not path.is_file() or file_sha256(path) != output.sha256:
            bad.append(output.path)
    return bad
