"""Command-line interface.

The flag surface drives analysis runs::

    solsweep (--file FILES... | --dataset DATASETS...) --tool TOOLS...
             [--skip-existing] [--processes N] [--list {tools,datasets}]
             [--info TOOLS...] [--runtime {auto,docker,local}]
             [--output DIR] [--timeout SECONDS]

Maintenance subcommands (``solsweep <subcommand> ...``): ir-dump, rules,
corpus-stats, import-curated, score, serve.

Exit codes: 0 when all tasks completed (findings never change the exit
code), 1 on infrastructure failures, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import enum
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from solsweep.datasets import (
    ManifestError,
    MissingPath,
    UnknownDataset,
    bundled_corpus_dir,
    corpus_stats,
    dataset_names,
    default_datasets,
    dedup_key,
    load_annotations,
    resolve_dataset,
)
from solsweep.datasets.annotations import MANIFEST_NAME, import_curated
from solsweep.executor.batch import _existing_hashes, run_batch
from solsweep.executor.runtime import RuntimeUnavailable, pick_runtime
from solsweep.executor.tasks import DEFAULT_TIMEOUT
from solsweep.ir import ParseError, SourceFile, dump_tree, parse_source
from solsweep.normalize.report import read_report
from solsweep.registry import UnknownTool, default_registry
from solsweep.reporting import build_category_matrix
from solsweep.rules import BASE_RULESET, EXTENDED_RULESET, rules_manifest


class UsageError(Exception):
    pass


class Mode(enum.Enum):
    ANALYZE = "analyze"
    INFO = "info"
    LIST = "list"


@dataclass
class CliInvocation:
    mode: Mode
    files: list[Path] = field(default_factory=list)
    dataset_names: list[str] = field(default_factory=list)
    tool_ids: list[str] = field(default_factory=list)
    skip_existing: bool = False
    processes: int = 1
    list_target: str | None = None
    runtime: str = "auto"
    output: Path = Path("results")
    timeout: float = DEFAULT_TIMEOUT


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="solsweep", add_help=True)
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--file", dest="files", nargs="+", metavar="FILES", default=[])
    group.add_argument("--dataset", dest="datasets", nargs="+", metavar="DATASETS", default=[])
    parser.add_argument("--tool", dest="tools", nargs="+", metavar="TOOLS", default=[])
    parser.add_argument("--info", dest="info", nargs="+", metavar="TOOLS", default=[])
    parser.add_argument("--skip-existing", action="store_true")
    parser.add_argument("--processes", type=int, default=1, metavar="PROCESSES")
    parser.add_argument("--list", dest="list_target", choices=["tools", "datasets"])
    parser.add_argument("--runtime", choices=["auto", "docker", "local"], default="auto")
    parser.add_argument("--output", type=Path, default=Path("results"), metavar="DIR")
    parser.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, metavar="SECONDS")
    return parser


def synopsis() -> str:
    return _build_parser().format_usage()


def parse_args(argv: list[str]) -> CliInvocation:
    """Map the flag surface onto an invocation; raises UsageError on violations."""
    ns = _build_parser().parse_args(argv)
    if ns.processes < 1:
        raise UsageError("--processes must be at least 1")
    if ns.list_target and (ns.files or ns.datasets or ns.tools or ns.info):
        raise UsageError("--list cannot be combined with other modes")
    if ns.info and (ns.files or ns.datasets or ns.tools):
        raise UsageError("--info cannot be combined with an analysis run")

    common = dict(
        skip_existing=ns.skip_existing,
        processes=ns.processes,
        runtime=ns.runtime,
        output=ns.output,
        timeout=ns.timeout,
    )
    if ns.list_target:
        return CliInvocation(mode=Mode.LIST, list_target=ns.list_target, **common)
    if ns.info:
        return CliInvocation(mode=Mode.INFO, tool_ids=list(ns.info), **common)
    if bool(ns.files) == bool(ns.datasets):
        raise UsageError("exactly one of --file or --dataset is required")
    if not ns.tools:
        raise UsageError("--tool requires at least one tool id")
    return CliInvocation(
        mode=Mode.ANALYZE,
        files=[Path(f) for f in ns.files],
        dataset_names=list(ns.datasets),
        tool_ids=list(ns.tools),
        **common,
    )


def execute(inv: CliInvocation) -> int:
    if inv.mode is Mode.LIST:
        return _do_list(inv)
    if inv.mode is Mode.INFO:
        return _do_info(inv)
    return _do_analyze(inv)


def _do_list(inv: CliInvocation) -> int:
    if inv.list_target == "tools":
        for tool in default_registry().all():
            print(f"{tool.id:<24} {tool.title}")
    else:
        datasets = default_datasets()
        for name in dataset_names(datasets):
            print(f"{name:<24} {len(datasets[name].entries)} path(s)")
    return 0


def _do_info(inv: CliInvocation) -> int:
    registry = default_registry()
    try:
        blocks = [registry.info(tool_id) for tool_id in inv.tool_ids]
    except UnknownTool as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("\n\n".join(blocks))
    return 0


def _do_analyze(inv: CliInvocation) -> int:
    registry = default_registry()
    try:
        tools = [registry.get(tool_id) for tool_id in inv.tool_ids]
    except UnknownTool as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        contracts = _resolve_contracts(inv)
    except (UnknownDataset, MissingPath, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not contracts:
        print("error: no contracts to analyze", file=sys.stderr)
        return 2

    try:
        runtime = pick_runtime(inv.runtime)
    except RuntimeUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    summary = run_batch(
        tools,
        contracts,
        runtime,
        out_dir=inv.output,
        processes=inv.processes,
        skip_existing=inv.skip_existing,
        timeout=inv.timeout,
    )

    print(
        f"executed {summary.executed}, skipped {summary.skipped}, "
        f"failed {summary.failed} in {summary.duration:.2f}s"
    )
    by_tool: dict[str, int] = {}
    for report in summary.reports:
        by_tool[report.tool_id] = by_tool.get(report.tool_id, 0) + len(report.findings)
    for tool in tools:
        print(f"  {tool.id}: {by_tool.get(tool.id, 0)} finding(s)")
    for error in summary.errors:
        print(f"  failure: {error}", file=sys.stderr)
    print(f"results under {inv.output}/<tool>/{summary.run_stamp}/")

    _score_against_annotations(inv, tools, contracts, summary)
    return 0 if summary.failed == 0 else 1


def _resolve_contracts(inv: CliInvocation) -> list[Path]:
    contracts: list[Path] = []
    if inv.files:
        for entry in inv.files:
            if entry.is_dir():
                contracts.extend(sorted(entry.rglob("*.sol")))
            elif entry.is_file():
                contracts.append(entry)
            else:
                raise FileNotFoundError(f"no such file: {entry}")
        return contracts
    datasets = default_datasets()
    for name in inv.dataset_names:
        contracts.extend(resolve_dataset(name, datasets))
    unique: list[Path] = []
    seen: set[str] = set()
    for path in contracts:
        key = dedup_key(path.read_text(encoding="utf-8", errors="replace"))
        if key not in seen:
            seen.add(key)
            unique.append(path)
    return unique


def _score_against_annotations(inv, tools, contracts, summary) -> None:
    """When analyzed contracts belong to an annotated corpus, print matrices."""
    manifests: set[Path] = set()
    for contract in contracts:
        for parent in list(contract.resolve().parents)[:4]:
            if (parent / MANIFEST_NAME).is_file():
                manifests.add(parent)
                break
    if not manifests:
        return
    annotations = []
    for corpus_dir in sorted(manifests):
        try:
            annotations.extend(load_annotations(corpus_dir))
        except ManifestError as exc:
            print(f"warning: skipping corpus annotations: {exc}", file=sys.stderr)
    analyzed = {c.resolve() for c in contracts}
    annotations = [a for a in annotations if a.path in analyzed]
    if not annotations:
        return
    for tool in tools:
        reports = [r for r in summary.reports if r.tool_id == tool.id]
        matrix = build_category_matrix(reports, annotations)
        print(f"\ndetection matrix for {tool.id}:")
        print(matrix.render())
        stamp_dir = inv.output / tool.id / summary.run_stamp
        if stamp_dir.is_dir():
            (stamp_dir / "matrix.txt").write_text(matrix.render() + "\n", encoding="utf-8")
            (stamp_dir / "matrix.json").write_text(
                json.dumps(matrix.to_dict(), indent=2) + "\n", encoding="utf-8"
            )


# -- maintenance subcommands --------------------------------------------------


def _cmd_ir_dump(argv: list[str]) -> int:
    parser = _Parser(prog="solsweep ir-dump")
    parser.add_argument("files", nargs="+", type=Path)
    ns = parser.parse_args(argv)
    for path in ns.files:
        try:
            print(dump_tree(parse_source(SourceFile.load(path))), end="")
        except ParseError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return 1
    return 0


def _cmd_rules(argv: list[str]) -> int:
    parser = _Parser(prog="solsweep rules")
    parser.add_argument("--ruleset", choices=["base", "extended"], default="extended")
    ns = parser.parse_args(argv)
    ruleset = BASE_RULESET if ns.ruleset == "base" else EXTENDED_RULESET
    print(rules_manifest(ruleset), end="")
    return 0


def _cmd_corpus_stats(argv: list[str]) -> int:
    parser = _Parser(prog="solsweep corpus-stats")
    parser.add_argument("corpus", nargs="?", type=Path, default=bundled_corpus_dir())
    ns = parser.parse_args(argv)
    try:
        stats = corpus_stats(load_annotations(ns.corpus))
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(stats.render())
    return 0


def _cmd_import_curated(argv: list[str]) -> int:
    parser = _Parser(prog="solsweep import-curated")
    parser.add_argument("checkout", type=Path)
    parser.add_argument("dest", type=Path)
    ns = parser.parse_args(argv)
    try:
        count = import_curated(ns.checkout, ns.dest)
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"imported {count} contract(s) into {ns.dest}")
    return 0


def _cmd_score(argv: list[str]) -> int:
    parser = _Parser(prog="solsweep score")
    parser.add_argument("results_dir", type=Path)
    parser.add_argument("--corpus", type=Path, default=bundled_corpus_dir())
    ns = parser.parse_args(argv)
    try:
        annotations = load_annotations(ns.corpus)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not ns.results_dir.is_dir():
        print(f"error: no such results directory: {ns.results_dir}", file=sys.stderr)
        return 1
    for tool_dir in sorted(p for p in ns.results_dir.iterdir() if p.is_dir()):
        newest = _existing_hashes(ns.results_dir, tool_dir.name)
        reports = [read_report(pair_dir) for pair_dir in newest.values()]
        if not reports:
            continue
        matrix = build_category_matrix(reports, annotations)
        print(f"detection matrix for {tool_dir.name}:")
        print(matrix.render())
        print()
    return 0


def _cmd_serve(argv: list[str]) -> int:
    parser = _Parser(prog="solsweep serve")
    parser.add_argument("--host", default=os.environ.get("SOLSWEEP_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("SOLSWEEP_PORT", "8730")))
    ns = parser.parse_args(argv)
    import uvicorn

    from solsweep.api import create_app

    uvicorn.run(create_app(), host=ns.host, port=ns.port)
    return 0


_SUBCOMMANDS = {
    "ir-dump": _cmd_ir_dump,
    "rules": _cmd_rules,
    "corpus-stats": _cmd_corpus_stats,
    "import-curated": _cmd_import_curated,
    "score": _cmd_score,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in _SUBCOMMANDS:
        try:
            return _SUBCOMMANDS[argv[0]](argv[1:])
        except UsageError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        inv = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}\n{synopsis()}", file=sys.stderr, end="")
        return 2
    return execute(inv)


if __name__ == "__main__":
    sys.exit(main())
