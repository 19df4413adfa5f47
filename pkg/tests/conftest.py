from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracle_scan

from solsweep.datasets import bundled_corpus_dir, load_annotations
from solsweep.ir import SourceFile, parse_source

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return bundled_corpus_dir()


@pytest.fixture(scope="session")
def corpus_annotations(corpus_dir):
    return load_annotations(corpus_dir)


@pytest.fixture(scope="session")
def corpus_files(corpus_dir) -> list[Path]:
    return sorted(corpus_dir.rglob("*.sol"))


def parse_text(text: str, path: str = "t.sol"):
    file = SourceFile.from_text(text, path)
    return parse_source(file), file


# -- acceptance summary: one pass/fail line per criterion ----------------------

_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    _acceptance_results.append((report.nodeid.split("::")[-1], outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{outcome}  {name}")
