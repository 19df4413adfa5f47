"""One (tool, contract) execution: command assembly, capture, timing."""

from __future__ import annotations

import json
import shlex
import time
from dataclasses import dataclass, field
from pathlib import Path

from solsweep.executor.runtime import (
    CONTRACT_MOUNT_DIR,
    ContainerRuntime,
    RESULTS_MOUNT_DIR,
)
from solsweep.ir.parser import ParseError, parse_source
from solsweep.ir.source import SourceFile
from solsweep.normalize.serialize import finding_to_dict
from solsweep.registry.descriptor import ToolDescriptor
from solsweep.registry.registry import BUILTIN_BASE_ID, BUILTIN_EXTENDED_ID
from solsweep.rules.builtin import BASE_RULESET, EXTENDED_RULESET, run_rules

DEFAULT_TIMEOUT = 1800.0


@dataclass(frozen=True)
class AnalysisTask:
    tool: ToolDescriptor
    contract_path: Path
    image: str  # resolved for the contract's compiler-version class
    timeout: float = DEFAULT_TIMEOUT

    @property
    def tool_id(self) -> str:
        return self.tool.id


@dataclass
class RawResult:
    """Captured output of one task. ``exit_status`` is None after a timeout."""

    tool_id: str
    contract_path: Path
    exit_status: int | None
    stdout: bytes
    stderr: bytes
    started_at: float
    finished_at: float
    harvested_files: dict[str, bytes] = field(default_factory=dict)

    @property
    def duration(self) -> float:
        return self.finished_at - self.started_at

    @property
    def timed_out(self) -> bool:
        return self.exit_status is None

    @property
    def stdout_text(self) -> str:
        return self.stdout.decode("utf-8", errors="replace")

    @property
    def stderr_text(self) -> str:
        return self.stderr.decode("utf-8", errors="replace")


def build_command(tool: ToolDescriptor, mount_path: str) -> list[str]:
    """Split the command template and substitute mount placeholders.

    ``{contract}`` and ``{results}`` expand to the in-container paths; when
    the template never references the contract, its path is appended as the
    final argument, matching the convention of existing plugin commands.
    """
    args = shlex.split(tool.command)
    substituted = [
        a.replace("{contract}", mount_path).replace("{results}", RESULTS_MOUNT_DIR)
        for a in args
    ]
    if "{contract}" not in tool.command:
        substituted.append(mount_path)
    return substituted


def run_task(task: AnalysisTask, runtime: ContainerRuntime) -> RawResult:
    """Execute one task and capture its raw output.

    Tool crashes and timeouts are recorded in the result; only
    infrastructure problems (missing contract, unreachable runtime,
    unavailable image) raise.
    """
    if not task.contract_path.is_file():
        raise FileNotFoundError(f"contract not found: {task.contract_path}")
    if task.tool.native:
        return _run_builtin(task)
    started = time.time()
    mount_path = f"{CONTRACT_MOUNT_DIR}/{task.contract_path.name}"
    args = build_command(task.tool, mount_path)
    harvest = [task.tool.output_file] if task.tool.output_file else []
    result = runtime.run(
        task.image, args, task.contract_path, mount_path, task.timeout, harvest
    )
    finished = time.time()
    return RawResult(
        tool_id=task.tool.id,
        contract_path=task.contract_path,
        exit_status=result.exit_code,
        stdout=result.stdout,
        stderr=result.stderr,
        started_at=started,
        finished_at=finished,
        harvested_files=result.harvested,
    )


_BUILTIN_RULESETS = {
    BUILTIN_BASE_ID: BASE_RULESET,
    BUILTIN_EXTENDED_ID: EXTENDED_RULESET,
}


def _run_builtin(task: AnalysisTask) -> RawResult:
    """In-process execution path for the bundled detector."""
    started = time.time()
    ruleset = _BUILTIN_RULESETS[task.tool.id]
    try:
        file = SourceFile.load(task.contract_path)
        findings = run_rules(parse_source(file), file, ruleset)
        payload = {
            "tool": task.tool.id,
            "findings": [finding_to_dict(f) for f in findings],
        }
        stdout = (json.dumps(payload, indent=2) + "\n").encode("utf-8")
        exit_status: int | None = 0
        stderr = b""
    except (ParseError, UnicodeDecodeError) as exc:
        stdout = b""
        stderr = f"analysis failed: {exc}\n".encode("utf-8")
        exit_status = 1
    finished = time.time()
    return RawResult(
        tool_id=task.tool.id,
        contract_path=task.contract_path,
        exit_status=exit_status,
        stdout=stdout,
        stderr=stderr,
        started_at=started,
        finished_at=finished,
    )
