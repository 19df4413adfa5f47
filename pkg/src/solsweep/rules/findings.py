"""The normalized vulnerability finding record."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

from solsweep.taxonomy import DaspCategory

#: Origin marker for findings produced by the built-in detector.
ORIGIN_BUILTIN = "builtin"


class Severity(enum.Enum):
    WARNING = "Warning"
    ERROR = "Error"


@dataclass(frozen=True)
class Finding:
    """One vulnerability report, regardless of which tool produced it.

    ``lines`` is an inclusive (start, end) pair; (0, 0) means the producing
    tool reported no location. ``origin`` is a tool id, or ORIGIN_BUILTIN
    for the built-in detector.
    """

    rule_id: str
    dasp_category: DaspCategory
    contract_path: Path
    lines: tuple[int, int]
    message: str
    snippet: str = ""
    severity: Severity | None = None
    origin: str = ORIGIN_BUILTIN

    @property
    def start_line(self) -> int:
        return self.lines[0]
