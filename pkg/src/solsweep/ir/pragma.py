"""Compiler-version pragma extraction and classification around the 0.5.0 split."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from solsweep.ir.lexer import mask_comments_and_strings
from solsweep.ir.source import SourceFile

_V5 = (0, 5, 0)
_PRAGMA_RE = re.compile(r"pragma\s+solidity\s+([^;]+);")
_VERSION_RE = re.compile(r"^(\d+)(?:\.(\d+))?(?:\.(\d+))?$")
_COMPARATOR_RE = re.compile(r"(\^|~|>=|<=|>|<|=)?\s*(\d+(?:\.\d+){0,2})")

_UNBOUNDED = (999999, 0, 0)


class VersionClass(enum.Enum):
    BELOW_V5 = "below-0.5.0"
    AT_OR_ABOVE_V5 = "at-or-above-0.5.0"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class VersionConstraint:
    """A parsed `pragma solidity` constraint.

    ``classification`` is BELOW_V5 only when every admitted version is below
    0.5.0, AT_OR_ABOVE_V5 only when every admitted version is at least 0.5.0,
    and UNKNOWN otherwise (no pragma, unparseable text, or a range straddling
    the boundary).
    """

    raw: str
    lower_bound: tuple[int, int, int] | None
    classification: VersionClass

    @property
    def lower_bound_str(self) -> str | None:
        if self.lower_bound is None:
            return None
        return ".".join(str(p) for p in self.lower_bound)


def extract_pragma(file: SourceFile) -> VersionConstraint:
    """Read the first `pragma solidity` directive and classify it.

    Directives inside comments or strings are ignored. Files without a
    pragma, or with constraint text the parser cannot interpret, classify
    as UNKNOWN with the raw text preserved.
    """
    masked = mask_comments_and_strings(file.text)
    m = _PRAGMA_RE.search(masked)
    if not m:
        return VersionConstraint(raw="", lower_bound=None, classification=VersionClass.UNKNOWN)
    raw = m.group(1).strip()
    intervals = _parse_constraint(raw)
    if intervals is None:
        return VersionConstraint(raw=raw, lower_bound=None, classification=VersionClass.UNKNOWN)
    return VersionConstraint(
        raw=raw,
        lower_bound=_explicit_lower_bound(intervals),
        classification=_classify(intervals),
    )


def _parse_version(text: str) -> tuple[int, int, int] | None:
    m = _VERSION_RE.match(text)
    if not m:
        return None
    return tuple(int(g) if g else 0 for g in m.groups())  # type: ignore[return-value]


def _bump_caret(v: tuple[int, int, int]) -> tuple[int, int, int]:
    # ^0.4.24 -> <0.5.0 ; ^1.2.3 -> <2.0.0
    if v[0] > 0:
        return (v[0] + 1, 0, 0)
    return (0, v[1] + 1, 0)


def _bump_tilde(v: tuple[int, int, int]) -> tuple[int, int, int]:
    return (v[0], v[1] + 1, 0)


# An interval is [lo, hi) with inclusive lo and exclusive hi; explicit_lo marks
# whether lo came from an explicit comparator rather than the implicit zero.
@dataclass(frozen=True)
class _Interval:
    lo: tuple[int, int, int]
    hi: tuple[int, int, int]
    explicit_lo: bool

    @property
    def empty(self) -> bool:
        return self.lo >= self.hi


def _comparator_interval(op: str, v: tuple[int, int, int]) -> _Interval:
    if op == "^":
        return _Interval(v, _bump_caret(v), True)
    if op == "~":
        return _Interval(v, _bump_tilde(v), True)
    if op == ">=":
        return _Interval(v, _UNBOUNDED, True)
    if op == ">":
        return _Interval((v[0], v[1], v[2] + 1), _UNBOUNDED, True)
    if op == "<":
        return _Interval((0, 0, 0), v, False)
    if op == "<=":
        return _Interval((0, 0, 0), (v[0], v[1], v[2] + 1), False)
    # exact pin: "=0.4.24" or bare "0.4.24"
    return _Interval(v, (v[0], v[1], v[2] + 1), True)


def _parse_constraint(raw: str) -> list[_Interval] | None:
    """Parse a constraint into a union of intervals, or None if unparseable."""
    intervals: list[_Interval] = []
    for alternative in raw.split("||"):
        alternative = alternative.strip()
        if not alternative:
            return None
        lo = (0, 0, 0)
        hi = _UNBOUNDED
        explicit = False
        pos = 0
        matched = False
        while pos < len(alternative):
            m = _COMPARATOR_RE.match(alternative, pos)
            if not m:
                if alternative[pos].isspace():
                    pos += 1
                    continue
                return None
            matched = True
            version = _parse_version(m.group(2))
            if version is None:
                return None
            piece = _comparator_interval(m.group(1) or "=", version)
            lo = max(lo, piece.lo)
            hi = min(hi, piece.hi)
            explicit = explicit or piece.explicit_lo
            pos = m.end()
        if not matched:
            return None
        intervals.append(_Interval(lo, hi, explicit))
    return intervals


def _classify(intervals: list[_Interval]) -> VersionClass:
    live = [iv for iv in intervals if not iv.empty]
    if not live:
        return VersionClass.UNKNOWN
    all_below = all(iv.hi <= _V5 for iv in live)
    all_at_or_above = all(iv.lo >= _V5 for iv in live)
    if all_below:
        return VersionClass.BELOW_V5
    if all_at_or_above:
        return VersionClass.AT_OR_ABOVE_V5
    return VersionClass.UNKNOWN


def _explicit_lower_bound(intervals: list[_Interval]) -> tuple[int, int, int] | None:
    explicit = [iv.lo for iv in intervals if not iv.empty and iv.explicit_lo]
    if not explicit:
        return None
    return min(explicit)
