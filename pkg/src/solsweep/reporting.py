"""Aggregation of normalized reports into per-category detection matrices.

An annotated vulnerability counts as detected when some finding of the same
category overlaps its line range in the same file. Rows are rendered as
``detected/annotated percent`` per category plus a Total row.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from solsweep.datasets.annotations import AnnotatedContract
from solsweep.normalize.report import NormalizedReport
from solsweep.rules.findings import Finding
from solsweep.taxonomy import CATEGORY_ORDER, DaspCategory


@dataclass(frozen=True)
class CategoryMatrix:
    rows: dict[DaspCategory, tuple[int, int]]  # category -> (detected, annotated)
    total: tuple[int, int]

    def detected(self, category: DaspCategory) -> int:
        return self.rows[category][0]

    def annotated(self, category: DaspCategory) -> int:
        return self.rows[category][1]

    def render(self) -> str:
        width = max(len(c.label) for c in CATEGORY_ORDER)
        lines = []
        for category in CATEGORY_ORDER:
            detected, annotated = self.rows[category]
            lines.append(f"{category.label:<{width}}  {_cell(detected, annotated)}")
        lines.append(f"{'Total':<{width}}  {_cell(*self.total)}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "rows": {
                c.label: {"detected": d, "annotated": a}
                for c, (d, a) in ((c, self.rows[c]) for c in CATEGORY_ORDER)
            },
            "total": {"detected": self.total[0], "annotated": self.total[1]},
        }


def _cell(detected: int, annotated: int) -> str:
    pct = round(100 * detected / annotated) if annotated else 0
    return f"{detected:>3}/{annotated:<3} {pct:>3}%"


def matrix_from_findings(
    findings: Sequence[Finding], annotations: Sequence[AnnotatedContract]
) -> CategoryMatrix:
    by_file: dict[Path, list[Finding]] = {}
    for finding in findings:
        by_file.setdefault(_norm(finding.contract_path), []).append(finding)

    rows: dict[DaspCategory, tuple[int, int]] = {c: (0, 0) for c in CATEGORY_ORDER}
    for ann in annotations:
        candidates = [
            f for f in by_file.get(_norm(ann.path), []) if f.dasp_category is ann.category
        ]
        for start, end in ann.vuln_lines:
            hit = any(
                f.lines[0] <= end and f.lines[1] >= start and f.lines[0] >= 1
                for f in candidates
            )
            detected, annotated = rows[ann.category]
            rows[ann.category] = (detected + (1 if hit else 0), annotated + 1)
    total = (sum(d for d, _ in rows.values()), sum(a for _, a in rows.values()))
    return CategoryMatrix(rows=rows, total=total)


def build_category_matrix(
    reports: Sequence[NormalizedReport], annotations: Sequence[AnnotatedContract]
) -> CategoryMatrix:
    findings = [f for report in reports for f in report.findings]
    return matrix_from_findings(findings, annotations)


def _norm(path: Path) -> Path:
    try:
        return path.resolve()
    except OSError:
        return path
