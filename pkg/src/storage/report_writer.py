"""
Tabular output for sweeps and experiment reports

CSV: optional '# key=value' provenance lines, a header row, RFC-4180 quoting,
floats printed with 9 significant digits. JSON: one object per line with
the row's key order preserved.
"""
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, TextIO, Union

from pydantic import BaseModel

FORMATS = ("csv", "json")

Row = Mapping[str, object]


def format_number(value: object) -> object:
    """Floats to 9 significant digits; everything else unchanged"""
    if isinstance(value, bool) or not isinstance(value, float):
        return value
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".9g")


def _json_value(value: object) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return format_number(value)
    if isinstance(value, float):
        return float(format(value, ".9g"))
    return value


def as_row(item: Union[Row, BaseModel]) -> Dict[str, object]:
    if isinstance(item, BaseModel):
        return item.model_dump()
    return dict(item)


def flatten(row: Row, prefix: str = "") -> Dict[str, object]:
    """Nested dicts become prefix_key columns, in insertion order"""
    flat: Dict[str, object] = {}
    for key, value in row.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(flatten(value, prefix=f"{name}_"))
        else:
            flat[name] = value
    return flat


class ReportWriter:
    """
    Writes rows to a text stream in one of FORMATS

    Args:
        fmt: 'csv' or 'json'
        stream: Destination, stdout when None
    """

    def __init__(self, fmt: str = "csv", stream: Optional[TextIO] = None):
        if fmt not in FORMATS:
            raise ValueError(f"unknown output format {fmt!r}; expected one of {FORMATS}")
        self.fmt = fmt
        self.stream = stream if stream is not None else sys.stdout

    def write(self, rows: Iterable[Union[Row, BaseModel]], provenance: Optional[Dict[str, object]] = None) -> None:
        flat: List[Dict[str, object]] = [flatten(as_row(r)) for r in rows]
        if self.fmt == "json":
            for row in flat:
                self.stream.write(json.dumps({k: _json_value(v) for k, v in row.items()}) + "\n")
            return

        for key, value in (provenance or {}).items():
            self.stream.write(f"# {key}={format_number(value)}\n")
        if not flat:
            return
        columns = list(flat[0].keys())
        writer = csv.writer(self.stream, lineterminator="\n")
        writer.writerow(columns)
        for row in flat:
            writer.writerow([format_number(row.get(c)) for c in columns])


def render(rows: Iterable[Union[Row, BaseModel]], fmt: str = "csv", provenance: Optional[Dict[str, object]] = None) -> str:
    buffer = io.StringIO()
    ReportWriter(fmt, buffer).write(rows, provenance)
    return buffer.getvalue()


def write_report(
    rows: Iterable[Union[Row, BaseModel]],
    fmt: str = "csv",
    out: Optional[Union[str, Path]] = None,
    provenance: Optional[Dict[str, object]] = None
) -> None:
    """Write rows to the --out path, or stdout when out is None"""
    text = render(rows, fmt, provenance)
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.parent and not path.parent.exists():
        raise ValueError(f"output directory does not exist: {path.parent}")
    path.write_text(text, encoding="utf-8")
