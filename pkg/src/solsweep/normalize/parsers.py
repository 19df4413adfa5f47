"""Output parsers for bundled tools, plus the fallback for unknown formats.

A parser turns captured output bytes into finding dicts with at least
``rule``, ``line_start``, ``line_end`` and ``message`` keys; ``category``
(a DASP label) and ``severity`` are optional and filled in from the
taxonomy map when absent.
"""

from __future__ import annotations

import json
import re
from typing import Callable

ParseOutcome = tuple[list[dict], list[str]]
Parser = Callable[[bytes], ParseOutcome]

_ISSUE_RE = re.compile(r"^issue (\S+) line (\d+)(?:-(\d+))?(?: (.*))?$")
_FOOTER_RE = re.compile(r"^(\d+) issues$")


def parse_builtin(source: bytes) -> ParseOutcome:
    """Identity parser: the built-in detector already emits normalized JSON."""
    try:
        doc = json.loads(source.decode("utf-8"))
        findings = doc["findings"]
        assert isinstance(findings, list)
    except Exception as exc:
        return [], [f"built-in detector output unreadable: {exc}"]
    return findings, []


def parse_mock_lines(source: bytes) -> ParseOutcome:
    """Line-oriented format: `issue <rule> line <N>[-<M>] <message>` + `<K> issues`."""
    findings: list[dict] = []
    footer_count: int | None = None
    for line in source.decode("utf-8", errors="replace").splitlines():
        m = _ISSUE_RE.match(line.strip())
        if m:
            start = int(m.group(2))
            end = int(m.group(3)) if m.group(3) else start
            findings.append(
                {
                    "rule": m.group(1),
                    "line_start": start,
                    "line_end": end,
                    "message": m.group(4) or "",
                }
            )
            continue
        f = _FOOTER_RE.match(line.strip())
        if f:
            footer_count = int(f.group(1))
    if footer_count is None:
        return [], ["no issue summary line found; unrecognized output"]
    errors = []
    if footer_count != len(findings):
        errors.append(f"summary says {footer_count} issues but {len(findings)} were listed")
    return findings, errors


def parse_mock_json(source: bytes) -> ParseOutcome:
    """File-based format: a JSON document with a `results` list."""
    try:
        doc = json.loads(source.decode("utf-8"))
        results = doc["results"]
        assert isinstance(results, list)
    except Exception as exc:
        return [], [f"result file unreadable: {exc}"]
    findings = []
    for item in results:
        line = int(item.get("line", 0))
        findings.append(
            {
                "rule": str(item.get("rule", "")),
                "line_start": line,
                "line_end": line,
                "message": str(item.get("message", "")),
            }
        )
    return findings, []


def parse_fallback(source: bytes) -> ParseOutcome:
    return [], ["no parser registered for this tool; raw output preserved unparsed"]


PARSERS: dict[str, Parser] = {
    "builtin": parse_builtin,
    "mock-lines": parse_mock_lines,
    "mock-files": parse_mock_json,
}


def get_parser(parser_id: str) -> Parser:
    return PARSERS.get(parser_id, parse_fallback)
