"""The normalized per-(tool, contract) report and its on-disk form.

Every result directory holds two files: ``result.json`` with the normalized
findings and ``output.raw`` with the verbatim captured output (stdout, or
the harvested result file for tools that write one). ``result.json`` is a
deterministic function of the tool's output, so repeated runs of a
deterministic tool produce byte-identical reports; execution timing is kept
at whole-second resolution for the same reason, with precise timings in the
batch log.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # imported for hints only; executor.tasks imports this module
    from solsweep.executor.tasks import RawResult

from solsweep.normalize.parsers import get_parser
from solsweep.normalize.serialize import finding_from_dict, finding_to_dict
from solsweep.normalize.taxonomy_map import DEFAULT_TAXONOMY, TaxonomyMap, map_to_dasp
from solsweep.registry.descriptor import ToolDescriptor
from solsweep.rules.findings import Finding

RESULT_FILE = "result.json"
RAW_FILE = "output.raw"


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class NormalizedReport:
    tool_id: str
    contract_path: Path
    contract_sha256: str
    success: bool
    duration: int  # whole seconds; see module docstring
    findings: list[Finding] = field(default_factory=list)
    parse_errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "tool": self.tool_id,
            "contract": self.contract_path.as_posix(),
            "contract_sha256": self.contract_sha256,
            "success": self.success,
            "duration": self.duration,
            "findings": [finding_to_dict(f) for f in self.findings],
            "errors": list(self.parse_errors),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NormalizedReport":
        contract_path = Path(str(data.get("contract", "")))
        tool_id = str(data.get("tool", ""))
        return cls(
            tool_id=tool_id,
            contract_path=contract_path,
            contract_sha256=str(data.get("contract_sha256", "")),
            success=bool(data.get("success", False)),
            duration=int(data.get("duration", 0)),
            findings=[
                finding_from_dict(f, contract_path, tool_id)
                for f in data.get("findings", [])
            ],
            parse_errors=[str(e) for e in data.get("errors", [])],
        )


def parse_tool_output(
    tool: ToolDescriptor,
    raw: "RawResult",
    taxonomy: TaxonomyMap = DEFAULT_TAXONOMY,
) -> NormalizedReport:
    """Normalize a raw result; never raises, failures land in parse_errors."""
    errors: list[str] = []
    if tool.output_file:
        source = raw.harvested_files.get(tool.output_file)
        if source is None:
            source = b""
            errors.append(f"declared output file {tool.output_file} was not produced")
    else:
        source = raw.stdout

    parsed: list[dict] = []
    if not errors:
        try:
            parsed, parse_errs = get_parser(tool.parser_id)(source)
            errors.extend(parse_errs)
        except Exception as exc:  # a parser bug must not kill the batch
            errors.append(f"parser crashed: {exc}")

    if raw.timed_out:
        errors.append("timeout: the task was terminated at its time limit")
    elif raw.exit_status != 0:
        errors.append(f"tool exited with status {raw.exit_status}")
        stderr_tail = raw.stderr_text.strip().splitlines()[-3:]
        errors.extend(f"stderr: {line}" for line in stderr_tail)

    findings = []
    for item in parsed:
        try:
            findings.append(_to_finding(item, tool, raw, taxonomy))
        except Exception as exc:  # totality: malformed entries become errors
            errors.append(f"malformed finding entry {item!r}: {exc}")
    try:
        sha = content_hash(raw.contract_path.read_bytes())
    except OSError:
        sha = ""
    return NormalizedReport(
        tool_id=tool.id,
        contract_path=raw.contract_path,
        contract_sha256=sha,
        success=raw.exit_status == 0 and not errors,
        duration=int(raw.duration),
        findings=findings,
        parse_errors=errors,
    )


def _to_finding(
    item: dict, tool: ToolDescriptor, raw: "RawResult", taxonomy: TaxonomyMap
) -> Finding:
    if "category" not in item:
        item = dict(item)
        item["category"] = map_to_dasp(taxonomy, tool.id, str(item.get("rule", ""))).label
    return finding_from_dict(item, raw.contract_path, tool.id)


def write_report(report: NormalizedReport, dir: str | Path, raw_output: bytes = b"") -> None:
    """Atomically write result.json and output.raw into a result directory."""
    dir = Path(dir)
    dir.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(report.to_dict(), indent=2) + "\n"
    _atomic_write(dir / RESULT_FILE, payload.encode("utf-8"))
    _atomic_write(dir / RAW_FILE, raw_output)


def read_report(dir: str | Path) -> NormalizedReport:
    data = json.loads((Path(dir) / RESULT_FILE).read_text(encoding="utf-8"))
    return NormalizedReport.from_dict(data)


def raw_output_of(raw: "RawResult", tool: ToolDescriptor) -> bytes:
    """The bytes preserved verbatim in output.raw for a given tool."""
    if tool.output_file:
        return raw.harvested_files.get(tool.output_file, b"")
    return raw.stdout


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
