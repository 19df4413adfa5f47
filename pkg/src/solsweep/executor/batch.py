"""Batch execution of (tool x contract) pairs with a bounded worker pool.

Result layout: ``<out_dir>/<tool_id>/<run_stamp>/<contract_stem>/`` with one
``result.json`` + ``output.raw`` per pair. A batch appends to a log file
named after the run stamp (date and hour) under the logs directory.

Skip-existing matches completed results by contract content hash across all
prior run stamps, so renaming or moving a contract file does not force a
rerun; result directories lacking result.json count as incomplete and are
retried.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Sequence

from solsweep.executor.runtime import ContainerRuntime, ImageMissing, RuntimeUnavailable
from solsweep.executor.tasks import DEFAULT_TIMEOUT, AnalysisTask, run_task
from solsweep.ir.pragma import extract_pragma
from solsweep.ir.source import SourceFile
from solsweep.normalize.report import (
    RESULT_FILE,
    NormalizedReport,
    content_hash,
    parse_tool_output,
    raw_output_of,
    read_report,
    write_report,
)
from solsweep.registry.descriptor import ToolDescriptor, select_image
from solsweep.registry.registry import NATIVE_IMAGE

logger = logging.getLogger("solsweep.batch")


def make_run_stamp(when: datetime | None = None) -> str:
    return (when or datetime.now()).strftime("%Y%m%d_%H%M")


def result_dir(out_dir: str | Path, tool_id: str, run_stamp: str, contract_path: str | Path) -> Path:
    """results/<tool>/<stamp>/<contract stem>/ for one executed pair."""
    return Path(out_dir) / tool_id / run_stamp / Path(contract_path).stem


def has_result(out_dir: str | Path, tool_id: str, contract_path: str | Path) -> bool:
    """True when a completed report for this contract's content exists under any stamp."""
    contract_path = Path(contract_path)
    if not contract_path.is_file():
        return False
    sha = content_hash(contract_path.read_bytes())
    return sha in _existing_hashes(Path(out_dir), tool_id)


def _existing_hashes(out_dir: Path, tool_id: str) -> dict[str, Path]:
    """Map contract hash -> newest completed result directory for a tool."""
    found: dict[str, tuple[str, Path]] = {}
    tool_dir = out_dir / tool_id
    if not tool_dir.is_dir():
        return {}
    for stamp_dir in sorted(tool_dir.iterdir()):
        if not stamp_dir.is_dir():
            continue
        for pair_dir in sorted(stamp_dir.iterdir()):
            result_file = pair_dir / RESULT_FILE
            if not result_file.is_file():
                continue  # incomplete run: raw output only
            try:
                sha = json.loads(result_file.read_text(encoding="utf-8")).get("contract_sha256", "")
            except (OSError, json.JSONDecodeError):
                continue
            if sha:
                prev = found.get(sha)
                if prev is None or stamp_dir.name >= prev[0]:
                    found[sha] = (stamp_dir.name, pair_dir)
    return {sha: pair_dir for sha, (stamp, pair_dir) in found.items()}


@dataclass
class BatchSummary:
    run_stamp: str
    executed: int = 0
    skipped: int = 0
    failed: int = 0
    duration: float = 0.0
    reports: list[NormalizedReport] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.executed + self.skipped + self.failed


def _pair_dirnames(contracts: Sequence[Path]) -> dict[Path, str]:
    """Stems for result directories; colliding stems get a path-hash suffix."""
    stems: dict[str, int] = {}
    for c in contracts:
        stems[c.stem] = stems.get(c.stem, 0) + 1
    names = {}
    for c in contracts:
        if stems[c.stem] > 1:
            suffix = hashlib.sha256(c.as_posix().encode()).hexdigest()[:8]
            names[c] = f"{c.stem}_{suffix}"
        else:
            names[c] = c.stem
    return names


def run_batch(
    tools: Sequence[ToolDescriptor],
    contracts: Sequence[Path],
    runtime: ContainerRuntime,
    out_dir: str | Path,
    processes: int = 1,
    skip_existing: bool = False,
    timeout: float = DEFAULT_TIMEOUT,
    run_stamp: str | None = None,
    log_dir: str | Path | None = None,
) -> BatchSummary:
    """Run every (tool, contract) pair at most once and write its reports.

    Individual tool failures (crashes, timeouts) produce error-marked reports
    and never abort the batch; infrastructure failures are counted in
    ``failed`` and listed in ``errors``.
    """
    if processes < 1:
        raise ValueError("processes must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stamp = run_stamp or make_run_stamp()
    summary = BatchSummary(run_stamp=stamp)
    started = time.time()

    log_path = _open_log(out_dir, log_dir, stamp)
    logger.info(
        "batch start: %d tool(s) x %d contract(s), processes=%d, skip_existing=%s, runtime=%s",
        len(tools), len(contracts), processes, skip_existing, runtime.name,
    )

    contracts = [Path(c) for c in contracts]
    dirnames = _pair_dirnames(contracts)
    hashes = {c: content_hash(c.read_bytes()) for c in contracts if c.is_file()}

    lock = threading.Lock()
    tasks: list[tuple[AnalysisTask, Path]] = []
    for tool in tools:
        prior = _existing_hashes(out_dir, tool.id) if skip_existing else {}
        for contract in contracts:
            sha = hashes.get(contract)
            if skip_existing and sha and sha in prior:
                summary.skipped += 1
                try:
                    summary.reports.append(read_report(prior[sha]))
                except (OSError, json.JSONDecodeError, ValueError):
                    pass
                logger.info("skipped %s on %s: existing result", tool.id, contract.name)
                continue
            image = NATIVE_IMAGE if tool.native else _resolve_image(tool, contract)
            task = AnalysisTask(tool=tool, contract_path=contract, image=image, timeout=timeout)
            tasks.append((task, out_dir / tool.id / stamp / dirnames[contract]))

    def execute(task: AnalysisTask, pair_dir: Path) -> None:
        raw = run_task(task, runtime)
        report = parse_tool_output(task.tool, raw)
        write_report(report, pair_dir, raw_output_of(raw, task.tool))
        with lock:
            summary.executed += 1
            summary.reports.append(report)
        logger.info(
            "executed %s on %s: %s in %.3fs, %d finding(s) -> %s",
            task.tool.id,
            task.contract_path.name,
            "timeout" if raw.timed_out else f"exit {raw.exit_status}",
            raw.duration,
            len(report.findings),
            pair_dir,
        )

    with ThreadPoolExecutor(max_workers=processes) as pool:
        futures = {pool.submit(execute, task, pair_dir): task for task, pair_dir in tasks}
        for future in as_completed(futures):
            task = futures[future]
            try:
                future.result()
            except (RuntimeUnavailable, ImageMissing, OSError) as exc:
                with lock:
                    summary.failed += 1
                    summary.errors.append(f"{task.tool.id} on {task.contract_path}: {exc}")
                logger.error("failed %s on %s: %s", task.tool.id, task.contract_path.name, exc)

    summary.duration = time.time() - started
    logger.info(
        "batch done: executed=%d skipped=%d failed=%d in %.2fs",
        summary.executed, summary.skipped, summary.failed, summary.duration,
    )
    _close_log(log_path)
    return summary


def _resolve_image(tool: ToolDescriptor, contract: Path) -> str:
    try:
        version = extract_pragma(SourceFile.load(contract))
    except (OSError, UnicodeDecodeError):
        version = extract_pragma(SourceFile.from_text(""))
    return select_image(tool, version)


_log_handlers: dict[Path, logging.Handler] = {}


def _open_log(out_dir: Path, log_dir: str | Path | None, stamp: str) -> Path:
    directory = Path(log_dir) if log_dir is not None else out_dir.parent / "logs"
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{stamp}.log"
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.INFO)
    _log_handlers[path] = handler
    return path


def _close_log(path: Path) -> None:
    handler = _log_handlers.pop(path, None)
    if handler is not None:
        logger.removeHandler(handler)
        handler.close()
