"""Text-file wrapper shared by all format readers and writers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..errors import ParseError

XYZ = "XYZ"
CIF = "CIF"
PDB = "PDB"

FORMATS = (XYZ, CIF, PDB)


@dataclass(frozen=True)
class FileDocument:
    """Raw contents of one structure file plus its declared format."""

    format: str
    text: str
    source_path: Optional[str] = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")


# Plain decimal literals only: no exponents, no leading +, no bare dot.
_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?")


def parse_number(field: str, line_no: int, what: str = "number") -> float:
    if _NUMBER_RE.fullmatch(field) is None:
        raise ParseError(f"unparseable {what} {field!r}", line_no)
    return float(field)


def parse_count(field: str, line_no: int, what: str = "count") -> int:
    if not field.isdigit():
        raise ParseError(f"unparseable {what} {field!r}", line_no)
    return int(field)


def require_format(doc: FileDocument, expected: str) -> None:
    if doc.format != expected:
        raise ValueError(f"expected a {expected} document, got {doc.format}")
