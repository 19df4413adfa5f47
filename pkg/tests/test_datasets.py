import random
import string

import pytest
import yaml

from solsweep.datasets import (
    ManifestError,
    MissingPath,
    UnknownDataset,
    corpus_stats,
    dedup_key,
    load_annotations,
    load_curated_annotations,
    load_dataset_config,
    resolve_dataset,
)
from solsweep.datasets.annotations import count_loc, import_curated
from solsweep.taxonomy import CATEGORY_ORDER, DaspCategory


# -- dedup key -----------------------------------------------------------------


def test_spaces_and_tabs_do_not_matter():
    assert dedup_key("contract A{}") == dedup_key("contract\tA {  }")


def test_different_code_different_key():
    assert dedup_key("contract A{}") != dedup_key("contract B{}")


def test_newlines_do_matter():
    assert dedup_key("contract A{}") != dedup_key("contract\nA{}")


def test_dedup_key_randomized_invariance():
    rng = random.Random(90125)
    for _ in range(300):
        text = "".join(rng.choice(string.printable) for _ in range(rng.randint(1, 60)))
        padded = list(text)
        for _ in range(rng.randint(1, 8)):
            padded.insert(rng.randint(0, len(padded)), rng.choice(" \t"))
        assert dedup_key("".join(padded)) == dedup_key(text)


# -- dataset config ---------------------------------------------------------------


@pytest.fixture()
def dataset_tree(tmp_path):
    root = tmp_path / "proj"
    (root / "config" / "dataset").mkdir(parents=True)
    re_dir = root / "dataset" / "reentrancy"
    ar_dir = root / "dataset" / "arithmetic"
    re_dir.mkdir(parents=True)
    ar_dir.mkdir(parents=True)
    (re_dir / "reentrance.sol").write_text("contract R1 {}")
    (re_dir / "zzz.sol").write_text("contract R2 {}")
    (ar_dir / "overflow.sol").write_text("contract O {}")
    config = root / "config" / "dataset" / "dataset.yaml"
    config.write_text(
        "reentrancy: dataset/reentrancy\n"
        "arithmetic:\n"
        "  - dataset/arithmetic\n"
        "  - dataset/reentrancy/reentrance.sol\n"
        "broken: dataset/not-there\n"
    )
    return config


def test_directory_expansion(dataset_tree):
    datasets = load_dataset_config(dataset_tree)
    paths = resolve_dataset("reentrancy", datasets)
    assert [p.name for p in paths] == ["reentrance.sol", "zzz.sol"]


def test_mixed_list_of_dir_and_file(dataset_tree):
    datasets = load_dataset_config(dataset_tree)
    paths = resolve_dataset("arithmetic", datasets)
    assert [p.name for p in paths] == ["overflow.sol", "reentrance.sol"]


def test_unknown_dataset(dataset_tree):
    datasets = load_dataset_config(dataset_tree)
    with pytest.raises(UnknownDataset):
        resolve_dataset("nope", datasets)


def test_missing_path_names_the_entry(dataset_tree):
    datasets = load_dataset_config(dataset_tree)
    with pytest.raises(MissingPath) as err:
        resolve_dataset("broken", datasets)
    assert "not-there" in str(err.value)


def test_duplicate_contents_resolve_once(tmp_path):
    root = tmp_path / "p"
    d = root / "dataset" / "dup"
    d.mkdir(parents=True)
    (d / "a.sol").write_text("contract X { uint a; }")
    (d / "b.sol").write_text("contract X {\tuint a;  }")  # same modulo spaces/tabs
    (d / "c.sol").write_text("contract Y {}")
    (root / "config" / "dataset").mkdir(parents=True)
    config = root / "config" / "dataset" / "dataset.yaml"
    config.write_text("dup: dataset/dup\n")
    paths = resolve_dataset("dup", load_dataset_config(config))
    assert [p.name for p in paths] == ["a.sol", "c.sol"]  # first occurrence kept


def test_resolution_is_deterministic(dataset_tree):
    datasets = load_dataset_config(dataset_tree)
    assert resolve_dataset("arithmetic", datasets) == resolve_dataset("arithmetic", datasets)


# -- annotations ---------------------------------------------------------------------


def test_bundled_corpus_loads(corpus_annotations):
    assert len(corpus_annotations) == 20
    categories = {a.category for a in corpus_annotations}
    assert DaspCategory.BAD_RANDOMNESS in categories
    assert DaspCategory.SHORT_ADDRESSES in categories
    for ann in corpus_annotations:
        assert ann.vuln_lines
        assert ann.path.is_file()


def test_corpus_stats_totals(corpus_annotations):
    stats = corpus_stats(corpus_annotations)
    for i in range(3):
        assert stats.total[i] == sum(row[i] for row in stats.rows.values())
    assert stats.total[0] == 20  # contracts
    assert stats.total[1] == 25  # tagged vulnerabilities
    assert stats.rows[DaspCategory.BAD_RANDOMNESS][0] == 5
    rendered = stats.render()
    assert "Total" in rendered and "Bad Randomness" in rendered


def test_empty_corpus_stats():
    stats = corpus_stats([])
    assert stats.total == (0, 0, 0)
    assert all(stats.rows[c] == (0, 0, 0) for c in CATEGORY_ORDER)


def test_count_loc_skips_blanks_and_comments():
    text = "// header\n\ncontract A {\n  /* doc */\n  uint a;\n}\n"
    assert count_loc(text) == 3


def test_manifest_error_reports_file_and_line(tmp_path):
    (tmp_path / "x.sol").write_text("contract X {}\n")
    manifest = tmp_path / "annotations.yaml"
    manifest.write_text(
        "contracts:\n"
        "  - path: x.sol\n"
        "    category: Bad Randomness\n"
        "    lines: [1]\n"
        "  - path: x.sol\n"
        "    category: Not A Category\n"
        "    lines: [1]\n"
    )
    with pytest.raises(ManifestError) as err:
        load_annotations(tmp_path)
    assert err.value.line == 5  # the malformed entry starts here
    assert "Not A Category" in str(err.value)
    assert "annotations.yaml" in str(err.value)


def test_manifest_rejects_out_of_range_lines(tmp_path):
    (tmp_path / "x.sol").write_text("contract X {}\n")
    (tmp_path / "annotations.yaml").write_text(
        "contracts:\n  - path: x.sol\n    category: Other\n    lines: [99]\n"
    )
    with pytest.raises(ManifestError):
        load_annotations(tmp_path)


def test_manifest_rejects_missing_file(tmp_path):
    (tmp_path / "annotations.yaml").write_text(
        "contracts:\n  - path: gone.sol\n    category: Other\n    lines: [1]\n"
    )
    with pytest.raises(ManifestError):
        load_annotations(tmp_path)


# -- curated-dataset importer -----------------------------------------------------


@pytest.fixture()
def curated_checkout(tmp_path):
    checkout = tmp_path / "checkout"
    (checkout / "dataset" / "reentrancy").mkdir(parents=True)
    (checkout / "dataset" / "time_manipulation").mkdir(parents=True)
    (checkout / "dataset" / "reentrancy" / "dao.sol").write_text(
        "contract Dao {\n  uint a;\n  uint b;\n  uint c;\n}\n"
    )
    (checkout / "dataset" / "time_manipulation" / "clock.sol").write_text(
        "contract Clock {\n  uint t;\n}\n"
    )
    index = [
        {
            "name": "dao",
            "path": "dataset/reentrancy/dao.sol",
            "source": "https://example.org/dao",
            "vulnerabilities": [
                {"lines": [2, 3], "category": "reentrancy"},
                {"lines": [4], "category": "reentrancy"},
            ],
        },
        {
            "name": "clock",
            "path": "dataset/time_manipulation/clock.sol",
            "vulnerabilities": [{"lines": [2], "category": "time_manipulation"}],
        },
    ]
    import json

    (checkout / "vulnerabilities.json").write_text(json.dumps(index))
    return checkout


def test_load_curated_annotations(curated_checkout):
    annotations = load_curated_annotations(curated_checkout)
    by_name = {a.path.name: a for a in annotations}
    dao = by_name["dao.sol"]
    assert dao.category is DaspCategory.REENTRANCY
    assert dao.vuln_lines == ((2, 3), (4, 4))
    assert dao.source_url == "https://example.org/dao"
    clock = by_name["clock.sol"]
    assert clock.category is DaspCategory.TIME_MANIPULATION


def test_import_curated_materializes_corpus(curated_checkout, tmp_path):
    dest = tmp_path / "corpus"
    count = import_curated(curated_checkout, dest)
    assert count == 2
    annotations = load_annotations(dest)
    assert len(annotations) == 2
    stats = corpus_stats(annotations)
    assert stats.total[0] == 2 and stats.total[1] == 3
    doc = yaml.safe_load((dest / "annotations.yaml").read_text())
    assert {e["category"] for e in doc["contracts"]} == {"Reentrancy", "Time Manipulation"}
