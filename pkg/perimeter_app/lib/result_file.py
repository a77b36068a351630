"""
Result files: one JSON header line behind '# ', then CSV rows `t,count` sorted by t.

Counts are written as decimal strings and the header carries a sha256 over the row block, so a
file read back and written again is byte-identical. `--format json` writes the same content as a
single JSON document.
"""
import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from perimeter_app import __version__
from perimeter_app.lib.errors import InvalidInputError
from perimeter_app.lib.tables import PerimeterTable, Provenance, TableMode

SCHEMA_VERSION = 1
FORMATS = ("csv", "json")
HEADER_PREFIX = "# "
COLUMNS = ("t", "count")


def _rows_block(rows: list[tuple[int, int]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for t, count in rows:
        writer.writerow((t, str(count)))
    return buffer.getvalue()


def _checksum(rows: list[tuple[int, int]]) -> str:
    return hashlib.sha256(_rows_block(rows).encode("utf-8")).hexdigest()


def _parse_count(raw: str) -> int:
    if not raw.isdigit():
        raise InvalidInputError(f"count {raw!r} is not a non-negative decimal integer")
    return int(raw)


def _parse(text: str) -> tuple[dict, list[tuple[int, int]]]:
    if text.startswith(HEADER_PREFIX):
        first, _, body = text.partition("\n")
        header = json.loads(first[len(HEADER_PREFIX):])
        reader = csv.reader(io.StringIO(body))
        if next(reader, None) != list(COLUMNS):
            raise InvalidInputError("result rows must start with the 't,count' column line")
        rows = [(int(t), _parse_count(c)) for t, c in reader]
    elif text.lstrip().startswith("{"):
        document = json.loads(text)
        header = document["header"]
        rows = [(int(t), _parse_count(c)) for t, c in document["rows"]]
    else:
        raise InvalidInputError("not a result file: expected a '# {...}' header line or a JSON document")
    if not isinstance(header, dict):
        raise InvalidInputError("result header must be a JSON object")
    return header, rows


@dataclass
class ResultFile:
    n: int
    dimension: int
    mode: TableMode
    provenance: Provenance
    rows: list[tuple[int, int]] = field(default_factory=list)
    wall_time: float = 0.0
    generator: str = f"perimeter_app {__version__}"
    schema: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        ts = [t for t, _ in self.rows]
        if ts != sorted(set(ts)):
            raise InvalidInputError("result rows must be sorted by t without repeats")

    @classmethod
    def from_table(cls, table: PerimeterTable, wall_time: float = 0.0) -> "ResultFile":
        return cls(table.n, table.dimension, table.mode, table.provenance, table.rows(), round(wall_time, 6))

    def to_table(self) -> PerimeterTable:
        return PerimeterTable(self.n, self.dimension, self.mode, dict(self.rows), self.provenance)

    @property
    def checksum(self) -> str:
        return _checksum(self.rows)

    def header(self) -> dict:
        return {
            "schema": self.schema,
            "n": self.n,
            "dimension": self.dimension,
            "mode": self.mode.value,
            "provenance": self.provenance.value,
            "generator": self.generator,
            "wall_time": self.wall_time,
            "checksum": self.checksum,
        }

    def dumps(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return HEADER_PREFIX + json.dumps(self.header(), sort_keys=True) + "\n" + _rows_block(self.rows)
        if fmt == "json":
            document = {"header": self.header(), "rows": [[t, str(c)] for t, c in self.rows]}
            return json.dumps(document, sort_keys=True, indent=2) + "\n"
        raise InvalidInputError(f"unknown result format {fmt!r}, expected one of {FORMATS}")

    @classmethod
    def loads(cls, text: str) -> "ResultFile":
        try:
            header, rows = _parse(text)
            result = cls(
                n=header["n"],
                dimension=header["dimension"],
                mode=TableMode(header["mode"]),
                provenance=Provenance(header["provenance"]),
                rows=rows,
                wall_time=header["wall_time"],
                generator=header["generator"],
                schema=header["schema"],
            )
        except InvalidInputError:
            raise
        # JSONDecodeError is a ValueError; short rows fail to unpack
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            raise InvalidInputError(f"malformed result file: {e}") from e
        if header.get("checksum") != result.checksum:
            raise InvalidInputError("result rows do not match the header checksum")
        return result

    def write(self, path: Path, fmt: str = "csv") -> None:
        path.write_text(self.dumps(fmt))

    @classmethod
    def read(cls, path: Path) -> "ResultFile":
        return cls.loads(path.read_text())
