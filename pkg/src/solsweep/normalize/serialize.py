"""Finding <-> JSON conversion shared by the report writer and the built-in tool."""

from __future__ import annotations

from pathlib import Path

from solsweep.rules.findings import Finding, Severity
from solsweep.taxonomy import DaspCategory


def finding_to_dict(finding: Finding) -> dict:
    out = {
        "rule": finding.rule_id,
        "category": finding.dasp_category.label,
        "line_start": finding.lines[0],
        "line_end": finding.lines[1],
        "message": finding.message,
        "snippet": finding.snippet,
    }
    if finding.severity is not None:
        out["severity"] = finding.severity.value
    return out


def finding_from_dict(data: dict, contract_path: Path, origin: str) -> Finding:
    severity = data.get("severity")
    return Finding(
        rule_id=str(data.get("rule", "")),
        dasp_category=DaspCategory.from_label(str(data.get("category", "Other"))),
        contract_path=contract_path,
        lines=(int(data.get("line_start", 0)), int(data.get("line_end", 0))),
        message=str(data.get("message", "")),
        snippet=str(data.get("snippet", "")),
        severity=Severity(severity) if severity else None,
        origin=origin,
    )
