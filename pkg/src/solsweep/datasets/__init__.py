"""Named datasets, contract deduplication and ground-truth annotations."""

from solsweep.datasets.config import (
    MissingPath,
    NamedDataset,
    UnknownDataset,
    bundled_corpus_dir,
    bundled_dataset_config,
    dataset_names,
    default_datasets,
    load_dataset_config,
    resolve_dataset,
)
from solsweep.datasets.dedup import dedup_key
from solsweep.datasets.annotations import (
    AnnotatedContract,
    CorpusStats,
    ManifestError,
    corpus_stats,
    load_annotations,
    load_curated_annotations,
)

__all__ = [
    "NamedDataset",
    "UnknownDataset",
    "MissingPath",
    "bundled_corpus_dir",
    "bundled_dataset_config",
    "dataset_names",
    "default_datasets",
    "load_dataset_config",
    "resolve_dataset",
    "dedup_key",
    "AnnotatedContract",
    "CorpusStats",
    "ManifestError",
    "corpus_stats",
    "load_annotations",
    "load_curated_annotations",
]
