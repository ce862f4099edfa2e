"""Result tables and their CSV serialization.

Numbers are written with ``repr`` so every float parses back to the exact
same value; metadata travels as leading ``# key = value`` comment lines and
round-trips through :func:`ResultTable.from_csv`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, TextIO


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class ResultTable:
    """Ordered rows of named columns plus a metadata block."""

    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_csv(self, stream: TextIO) -> None:
        for key, value in self.metadata.items():
            stream.write(f"# {key} = {value}\n")
        stream.write(",".join(self.columns) + "\n")
        for row in self.rows:
            stream.write(",".join(_format_cell(v) for v in row) + "\n")

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            self.to_csv(fh)

    @classmethod
    def from_csv(cls, lines: Iterable[str]) -> "ResultTable":
        metadata: dict[str, str] = {}
        columns: list[str] | None = None
        rows: list[tuple] = []
        for raw in lines:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                metadata[key.strip()] = value.strip()
                continue
            if columns is None:
                columns = line.split(",")
                continue
            cells = line.split(",")
            if len(cells) != len(columns):
                raise ValueError(f"row has {len(cells)} cells, expected {len(columns)}")
            rows.append(tuple(_parse_cell(c) for c in cells))
        if columns is None:
            raise ValueError("no header row found")
        return cls(columns=columns, rows=rows, metadata=metadata)
