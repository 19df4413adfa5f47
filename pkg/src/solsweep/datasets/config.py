"""Named-dataset configuration: names mapped to files, directories, or lists of both."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from solsweep.datasets.dedup import dedup_key


class UnknownDataset(Exception):
    def __init__(self, name: str, known: list[str]):
        super().__init__(f"unknown dataset {name!r}; available: {', '.join(known) or '(none)'}")
        self.name = name


class MissingPath(Exception):
    def __init__(self, dataset: str, entry: Path):
        super().__init__(f"dataset {dataset!r} references a missing path: {entry}")
        self.entry = entry


@dataclass(frozen=True)
class NamedDataset:
    name: str
    entries: tuple[Path, ...]

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("dataset name must be non-empty")
        if not self.entries:
            raise ValueError(f"dataset {self.name!r} has no entries")


def load_dataset_config(config_path: str | Path, base_dir: str | Path | None = None) -> dict[str, NamedDataset]:
    """Parse a dataset configuration file.

    Relative entry paths are resolved against ``base_dir``, which defaults to
    the directory two levels above the config file (the root of a
    ``config/dataset/dataset.yaml`` layout).
    """
    config_path = Path(config_path)
    if base_dir is None:
        parents = config_path.resolve().parents
        base_dir = parents[2] if len(parents) > 2 else parents[-1]
    doc = yaml.safe_load(config_path.read_text(encoding="utf-8")) or {}
    if not isinstance(doc, dict):
        raise ValueError(f"dataset config must be a mapping of names to paths: {config_path}")
    datasets: dict[str, NamedDataset] = {}
    for name, value in doc.items():
        raw_entries = value if isinstance(value, list) else [value]
        entries = tuple(_resolve_entry(str(e), Path(base_dir)) for e in raw_entries)
        datasets[str(name)] = NamedDataset(str(name), entries)
    return datasets


def _resolve_entry(entry: str, base_dir: Path) -> Path:
    p = Path(entry)
    return p if p.is_absolute() else base_dir / p


def dataset_names(datasets: dict[str, NamedDataset]) -> list[str]:
    return sorted(datasets)


def bundled_dataset_config() -> Path:
    return Path(str(resources.files("solsweep") / "config" / "dataset" / "dataset.yaml"))


def bundled_corpus_dir() -> Path:
    return Path(str(resources.files("solsweep") / "data" / "corpus"))


def default_datasets(base_dir: str | Path | None = None) -> dict[str, NamedDataset]:
    """Project-local dataset config when present, else the bundled one."""
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    local = base / "config" / "dataset" / "dataset.yaml"
    config = local if local.is_file() else bundled_dataset_config()
    return load_dataset_config(config)


def resolve_dataset(name: str, datasets: dict[str, NamedDataset]) -> list[Path]:
    """Expand a named dataset to a deduplicated, deterministic list of .sol files.

    Directories expand recursively in lexicographic order; duplicate contents
    (same dedup key) keep their first occurrence.
    """
    if name not in datasets:
        raise UnknownDataset(name, dataset_names(datasets))
    paths: list[Path] = []
    for entry in datasets[name].entries:
        if entry.is_dir():
            paths.extend(sorted(entry.rglob("*.sol")))
        elif entry.is_file():
            paths.append(entry)
        else:
            raise MissingPath(name, entry)
    unique: list[Path] = []
    seen: set[str] = set()
    for path in paths:
        key = dedup_key(path.read_text(encoding="utf-8", errors="replace"))
        if key not in seen:
            seen.add(key)
            unique.append(path)
    return unique
