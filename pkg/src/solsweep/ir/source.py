"""Source text container with offset <-> line/column mapping."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class SourceFile:
    """A Solidity source file plus a line index over its text.

    Offsets are character offsets into ``text``; lines and columns are 1-based.
    """

    path: Path
    text: str
    _line_starts: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        starts = [0]
        for i, ch in enumerate(self.text):
            if ch == "\n":
                starts.append(i + 1)
        object.__setattr__(self, "_line_starts", tuple(starts))

    @classmethod
    def load(cls, path: str | Path) -> "SourceFile":
        p = Path(path)
        return cls(path=p, text=p.read_text(encoding="utf-8"))

    @classmethod
    def from_text(cls, text: str, path: str | Path = "<memory>") -> "SourceFile":
        return cls(path=Path(path), text=text)

    @property
    def line_count(self) -> int:
        return len(self._line_starts)

    def position(self, offset: int) -> tuple[int, int]:
        """Map a character offset to (line, column), both 1-based.

        Valid for 0 <= offset <= len(text); the end offset maps to the
        position just past the last character.
        """
        if offset < 0 or offset > len(self.text):
            raise ValueError(f"offset {offset} out of range for text of length {len(self.text)}")
        line = bisect.bisect_right(self._line_starts, offset)
        return line, offset - self._line_starts[line - 1] + 1

    def offset(self, line: int, column: int) -> int:
        """Inverse of :meth:`position`."""
        if line < 1 or line > len(self._line_starts):
            raise ValueError(f"line {line} out of range")
        return self._line_starts[line - 1] + column - 1

    def line_of(self, offset: int) -> int:
        return self.position(offset)[0]

    def line_text(self, line: int) -> str:
        """The text of a 1-based line, without the trailing newline."""
        start = self._line_starts[line - 1]
        end = self._line_starts[line] - 1 if line < len(self._line_starts) else len(self.text)
        return self.text[start:end]
