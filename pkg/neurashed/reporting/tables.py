import csv
import io
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from neurashed.errors import ReportingError

logger = logging.getLogger(__name__)

Cell = str | int | float | None

@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: list[tuple[Cell, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ReportingError(f"row {i} has {len(row)} cells, expected {width}")

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list[Cell]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def records(self) -> list[dict[str, Cell]]:
        return [dict(zip(self.columns, row, strict=True)) for row in self.rows]

def format_cell(value: Cell) -> str:
    """Text for one cell. Floats use ``repr`` so they parse back bit-exactly."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(float(value))
    return str(value)

def render_csv(table: Table) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    writer.writerows([format_cell(v) for v in row] for row in table.rows)
    return buffer.getvalue()

def write_atomic(*, path: Path, data: str) -> None:
    """Write UTF-8 text through a temporary file in the same directory."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise

def emit_csv(table: Table, path: Path) -> None:
    write_atomic(path=path, data=render_csv(table))
    logger.info(f"Wrote {len(table)} rows to {path}")

def read_csv(path: Path) -> Table:
    """Read a CSV back as string cells."""
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        return Table(columns=tuple(header), rows=[tuple(r) for r in reader])
