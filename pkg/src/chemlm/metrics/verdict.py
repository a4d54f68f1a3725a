"""Shared verdict type for per-structure validity checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.valid

    @classmethod
    def ok(cls) -> "Verdict":
        return cls(True, None)

    @classmethod
    def fail(cls, reason: str) -> "Verdict":
        return cls(False, reason)
