"""CSV ingestion and the bundled 2023 GDP-per-capita reference data."""

import csv
import hashlib
import io
import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .errors import DomainError, ExtGiniError, ParseError
from .estimator import Sample

REFERENCE_RESOURCE = "gdp_2023.csv"
REFERENCE_SHA256 = "139faee64f3eaaba3a4ebc3dfccb14da3800e42a783cdecd1d6bff2422e6370b"

_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


@dataclass(frozen=True)
class DatasetFile:
    path: str
    sample: Sample
    labels: Optional[tuple] = None
    header: Optional[tuple] = None


def _is_number(cell):
    return _DECIMAL.fullmatch(cell.strip()) is not None


def parse_csv(text, path="<string>"):
    """Parse one-column ``value`` or two-column ``label,value`` CSV text.

    A first row whose value cell is not a number is taken as a header. Any
    later non-numeric value is a :class:`ParseError` naming the line.
    """
    rows = []
    width = None
    header = None
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) not in (1, 2):
            raise ParseError(f"expected 1 or 2 columns, got {len(row)}", lineno)
        if width is None:
            width = len(row)
            if not _is_number(row[-1]):
                header = tuple(cell.strip() for cell in row)
                continue
        elif len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", lineno)
        if not _is_number(row[-1]):
            raise ParseError(f"value {row[-1]!r} is not a plain decimal number", lineno)
        rows.append((row[0].strip() if width == 2 else None, float(row[-1])))
    if not rows:
        raise ParseError("no observations found")
    try:
        sample = Sample([v for _, v in rows])
    except DomainError as exc:
        raise ParseError(str(exc)) from None
    labels = tuple(label for label, _ in rows) if width == 2 else None
    return DatasetFile(path=str(path), sample=sample, labels=labels, header=header)


def load_csv(path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    return parse_csv(text, path)


def reference_bytes():
    return resources.files("extgini").joinpath("data", REFERENCE_RESOURCE).read_bytes()


def reference_checksum():
    return hashlib.sha256(reference_bytes()).hexdigest()


def load_reference_dataset():
    """The 17-country table of 2023 GDP per capita, verified against its checksum."""
    raw = reference_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != REFERENCE_SHA256:
        raise ExtGiniError(f"reference dataset checksum mismatch: {digest}")
    return parse_csv(raw.decode("utf-8"), f"extgini:data/{REFERENCE_RESOURCE}")
