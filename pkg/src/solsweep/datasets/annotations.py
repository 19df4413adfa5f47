"""Ground-truth vulnerability annotations for curated contract corpora.

A corpus directory carries one ``annotations.yaml`` manifest::

    contracts:
      - path: bad_randomness/lottery.sol
        category: Bad Randomness
        lines: [12, [15, 16]]
        url: https://example.org/original
        author: alice

Each element of ``lines`` is one tagged vulnerability: either a single line
or an inclusive [start, end] range. ``url`` and ``author`` are optional
traceability fields.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from pathlib import Path

import yaml

from solsweep.ir.lexer import mask_comments
from solsweep.taxonomy import CATEGORY_ORDER, DaspCategory

MANIFEST_NAME = "annotations.yaml"


class ManifestError(Exception):
    def __init__(self, path: Path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class AnnotatedContract:
    """One contract with tagged vulnerabilities of a single category."""

    path: Path
    category: DaspCategory
    vuln_lines: tuple[tuple[int, int], ...]
    source_url: str | None = None
    author: str | None = None


class _LineLoader(yaml.SafeLoader):
    """SafeLoader that records the source line of every mapping."""


def _mapping_with_line(loader: _LineLoader, node: yaml.MappingNode) -> dict:
    mapping = yaml.SafeLoader.construct_mapping(loader, node, deep=True)
    mapping["__line__"] = node.start_mark.line + 1
    return mapping


_LineLoader.add_constructor(
    yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _mapping_with_line
)


def load_annotations(corpus_dir: str | Path) -> list[AnnotatedContract]:
    """Load and validate the annotation manifest of a corpus directory."""
    corpus_dir = Path(corpus_dir)
    manifest = corpus_dir / MANIFEST_NAME
    if not manifest.is_file():
        raise ManifestError(manifest, 0, "annotation manifest not found")
    doc = yaml.load(manifest.read_text(encoding="utf-8"), Loader=_LineLoader)
    if not isinstance(doc, dict) or "contracts" not in doc:
        raise ManifestError(manifest, 1, "manifest must be a mapping with a 'contracts' list")
    entries = doc["contracts"]
    if not isinstance(entries, list):
        raise ManifestError(manifest, doc.get("__line__", 1), "'contracts' must be a list")
    annotations: list[AnnotatedContract] = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise ManifestError(manifest, 1, f"contract entry must be a mapping, got {entry!r}")
        line = entry.get("__line__", 1)
        annotations.append(_parse_entry(entry, corpus_dir, manifest, line))
    return annotations


def _parse_entry(
    entry: dict, corpus_dir: Path, manifest: Path, line: int
) -> AnnotatedContract:
    try:
        rel_path = entry["path"]
        category_label = entry["category"]
        raw_lines = entry["lines"]
    except KeyError as missing:
        raise ManifestError(manifest, line, f"missing required field {missing}") from None
    path = (corpus_dir / str(rel_path)).resolve()
    if not path.is_file():
        raise ManifestError(manifest, line, f"contract file not found: {rel_path}")
    try:
        category = DaspCategory.from_label(str(category_label))
    except ValueError as exc:
        raise ManifestError(manifest, line, str(exc)) from None
    if not isinstance(raw_lines, list) or not raw_lines:
        raise ManifestError(manifest, line, "'lines' must be a non-empty list")
    line_count = path.read_text(encoding="utf-8").count("\n") + 1
    ranges: list[tuple[int, int]] = []
    for item in raw_lines:
        if isinstance(item, int):
            start = end = item
        elif isinstance(item, list) and len(item) == 2 and all(isinstance(v, int) for v in item):
            start, end = item
        else:
            raise ManifestError(manifest, line, f"bad line range {item!r}; use N or [start, end]")
        if start < 1 or end < start:
            raise ManifestError(manifest, line, f"invalid line range {item!r}")
        if end > line_count:
            raise ManifestError(
                manifest, line, f"line range {item!r} exceeds file length ({line_count} lines)"
            )
        ranges.append((start, end))
    return AnnotatedContract(
        path=path,
        category=category,
        vuln_lines=tuple(ranges),
        source_url=entry.get("url"),
        author=entry.get("author"),
    )


# -- corpus statistics --------------------------------------------------------


@dataclass(frozen=True)
class CorpusStats:
    """Per-category (contracts, vulns, loc) counts plus a total row."""

    rows: dict[DaspCategory, tuple[int, int, int]]
    total: tuple[int, int, int]

    def render(self) -> str:
        width = max(len(c.label) for c in CATEGORY_ORDER)
        lines = [f"{'Category':<{width}}  Contracts  Vulns  LoC"]
        for category in CATEGORY_ORDER:
            contracts, vulns, loc = self.rows[category]
            lines.append(f"{category.label:<{width}}  {contracts:>9}  {vulns:>5}  {loc:>5}")
        contracts, vulns, loc = self.total
        lines.append(f"{'Total':<{width}}  {contracts:>9}  {vulns:>5}  {loc:>5}")
        return "\n".join(lines)


def count_loc(text: str) -> int:
    """Non-blank, non-comment lines, in the spirit of cloc."""
    return sum(1 for line in mask_comments(text).splitlines() if line.strip())


def corpus_stats(annotations: list[AnnotatedContract]) -> CorpusStats:
    rows: dict[DaspCategory, tuple[int, int, int]] = {}
    for category in CATEGORY_ORDER:
        of_category = [a for a in annotations if a.category is category]
        paths = {a.path for a in of_category}
        vulns = sum(len(a.vuln_lines) for a in of_category)
        loc = sum(count_loc(p.read_text(encoding="utf-8", errors="replace")) for p in sorted(paths))
        rows[category] = (len(paths), vulns, loc)
    total = tuple(sum(row[i] for row in rows.values()) for i in range(3))
    return CorpusStats(rows=rows, total=total)  # type: ignore[arg-type]


# -- importer for the smartbugs-curated dataset layout ------------------------


def load_curated_annotations(checkout_dir: str | Path) -> list[AnnotatedContract]:
    """Read annotations from a local checkout of the smartbugs-curated dataset.

    The checkout carries a ``vulnerabilities.json`` at its root; each record
    names a contract path and a list of tagged vulnerabilities with lines and
    a category. Every tagged vulnerability becomes one line range spanning
    its listed lines, clamped to the file length.
    """
    checkout_dir = Path(checkout_dir)
    index = checkout_dir / "vulnerabilities.json"
    if not index.is_file():
        raise FileNotFoundError(f"not a curated-dataset checkout (no vulnerabilities.json): {checkout_dir}")
    records = json.loads(index.read_text(encoding="utf-8"))
    annotations: list[AnnotatedContract] = []
    for record in records:
        path = (checkout_dir / record["path"]).resolve()
        if not path.is_file():
            continue
        line_count = path.read_text(encoding="utf-8", errors="replace").count("\n") + 1
        by_category: dict[DaspCategory, list[tuple[int, int]]] = {}
        for vuln in record.get("vulnerabilities", []):
            lines = [n for n in vuln.get("lines", []) if isinstance(n, int) and n >= 1]
            if not lines:
                continue
            try:
                category = DaspCategory.from_label(str(vuln.get("category", "")))
            except ValueError:
                category = DaspCategory.OTHER
            span = (min(lines), min(max(lines), line_count))
            by_category.setdefault(category, []).append(span)
        for category, ranges in by_category.items():
            annotations.append(
                AnnotatedContract(
                    path=path,
                    category=category,
                    vuln_lines=tuple(ranges),
                    source_url=record.get("source"),
                    author=record.get("author"),
                )
            )
    return annotations


def import_curated(checkout_dir: str | Path, dest_dir: str | Path) -> int:
    """Materialize a curated-dataset checkout as a local corpus directory.

    Contracts are copied into per-category subdirectories and an
    ``annotations.yaml`` manifest is written. Returns the number of contracts
    imported.
    """
    annotations = load_curated_annotations(checkout_dir)
    dest_dir = Path(dest_dir)
    dest_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    copied: set[Path] = set()
    for ann in sorted(annotations, key=lambda a: (a.category.label, a.path.name)):
        cat_dir = _category_slug(ann.category)
        rel = Path(cat_dir) / ann.path.name
        target = dest_dir / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        if target not in copied:
            shutil.copyfile(ann.path, target)
            copied.add(target)
        entry: dict = {
            "path": rel.as_posix(),
            "category": ann.category.label,
            "lines": [[a, b] for a, b in ann.vuln_lines],
        }
        if ann.source_url:
            entry["url"] = ann.source_url
        if ann.author:
            entry["author"] = ann.author
        entries.append(entry)
    manifest = dest_dir / MANIFEST_NAME
    manifest.write_text(
        yaml.safe_dump({"contracts": entries}, sort_keys=False, allow_unicode=True),
        encoding="utf-8",
    )
    return len(copied)


def _category_slug(category: DaspCategory) -> str:
    return category.label.lower().replace(" ", "_")
