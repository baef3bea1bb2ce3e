"""
Sample ingestion and output writers.

Samples are one float per line, or a CSV column selected by header name or 0-based index.
JSON output is sorted and indented so identical inputs give byte-identical files.
"""

import csv
import io
import json
import logging
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from pydantic_core import to_jsonable_python

from infobound.errors import EmptySample, MalformedInput, ParameterError

logger = logging.getLogger(__name__)


def _parse_float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError as e:
        raise ParameterError(f"{where}: {text!r} is not a number") from e


def parse_sample(text: str, column: str | int | None = None) -> np.ndarray:
    lines = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise EmptySample("no data lines")
    if column is None and "," not in lines[0]:
        return np.array([_parse_float(line.strip(), f"line {i + 1}") for i, line in enumerate(lines)])

    rows = list(csv.reader(lines))
    header = rows[0]
    has_header = not all(_is_number(cell) for cell in header)
    if column is None:
        index = 0
    elif isinstance(column, int) or str(column).isdigit():
        index = int(column)
    elif has_header and column in header:
        index = header.index(column)
    else:
        raise ParameterError(f"column {column!r} not found in header {header}")
    body = rows[1:] if has_header else rows
    if not body:
        raise EmptySample("no data rows")
    values = []
    for i, row in enumerate(body):
        if index >= len(row):
            raise ParameterError(f"row {i + 1} has no column {index}")
        values.append(_parse_float(row[index].strip(), f"row {i + 1}"))
    return np.array(values)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_text(path: Path | str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise MalformedInput(f"{path}: not UTF-8 text") from e


def read_sample(path: Path | str, column: str | int | None = None) -> np.ndarray:
    sample = parse_sample(read_text(path), column)
    logger.debug("read %d values from %s", sample.size, path)
    return sample


def read_json(path: Path | str) -> Any:
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path}: invalid JSON ({e.msg} at line {e.lineno} column {e.colno})") from e


def dumps_json(data: Any) -> str:
    return json.dumps(to_jsonable_python(data), indent=2, sort_keys=True) + "\n"


def dumps_csv(columns: Mapping[str, Sequence[Any]]) -> str:
    names = list(columns)
    lengths = {len(columns[name]) for name in names}
    if len(lengths) > 1:
        raise ParameterError(f"columns of unequal length: {sorted(lengths)}")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(names)
    for row in zip(*(columns[name] for name in names)):
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


def write_text(text: str, path: Path | str | None = None) -> None:
    """Write to `path`, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)
    logger.info("wrote %s", path)


def sidecar_path(path: Path | str) -> Path:
    return Path(path).with_suffix(".json") if Path(path).suffix != ".json" else Path(path).with_suffix(".manifest.json")
