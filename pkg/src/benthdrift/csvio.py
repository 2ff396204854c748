"""Deterministic CSV output and a matching reader.

Files carry their provenance as ``#``-prefixed comment lines (the
configuration echo), then a header row, then data rows.  Floats are
formatted ``%.9g`` and lines end with a bare LF regardless of platform, so
re-running the same configuration reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import os
from collections.abc import Iterable, Sequence

import numpy as np

__all__ = ["CsvTable", "format_cell", "emit_csv", "read_csv"]


def format_cell(value: object) -> str:
    """Canonical text for one CSV cell."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.9g" % float(value)
    raise TypeError(f"cannot format {type(value).__name__} as a CSV cell")


def emit_csv(
    path: str,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    comments: Iterable[str] = (),
) -> None:
    """Write a comment block, a header and rows to ``path``.

    Parent directories are created as needed.  The write is atomic at the
    file level: content is assembled in memory and written once.
    """
    buffer = io.StringIO()
    for line in comments:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(buffer.getvalue())


@dataclasses.dataclass(frozen=True)
class CsvTable:
    """Parsed CSV file: comment lines (without the marker), header, rows."""

    comments: tuple[str, ...]
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def column(self, name: str, dtype: type = float) -> np.ndarray:
        """One column as an array; ``dtype=str`` keeps the raw strings."""
        try:
            index = self.header.index(name)
        except ValueError:
            raise KeyError(f"no column named {name!r}") from None
        values = [row[index] for row in self.rows]
        if dtype is str:
            return np.array(values, dtype=object)
        return np.array([dtype(value) for value in values])


def read_csv(path: str) -> CsvTable:
    """Read a file produced by :func:`emit_csv`."""
    comments: list[str] = []
    data_lines: list[str] = []
    with open(path, encoding="utf-8", newline="") as handle:
        for line in handle:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            else:
                data_lines.append(line)
    reader = csv.reader(data_lines)
    parsed = [tuple(row) for row in reader if row]
    if not parsed:
        return CsvTable(comments=tuple(comments), header=(), rows=())
    return CsvTable(
        comments=tuple(comments),
        header=parsed[0],
        rows=tuple(parsed[1:]),
    )
