import json
import time
from pathlib import Path

from hypothesis import given
from hypothesis import strategies as st

from solsweep.executor import AnalysisTask, LocalProcessRuntime, run_task
from solsweep.executor.tasks import RawResult
from solsweep.normalize import (
    DEFAULT_TAXONOMY,
    NormalizedReport,
    map_to_dasp,
    parse_tool_output,
    read_report,
    write_report,
)
from solsweep.normalize.parsers import parse_mock_lines
from solsweep.normalize.report import RAW_FILE, RESULT_FILE, raw_output_of
from solsweep.registry import default_registry
from solsweep.registry.descriptor import ToolDescriptor
from solsweep.rules.findings import Finding, Severity
from solsweep.taxonomy import DaspCategory

REGISTRY = default_registry()


def raw_result(tool_id: str, contract: Path, stdout: bytes, exit_status: int | None = 0, harvested=None):
    now = time.time()
    return RawResult(
        tool_id=tool_id,
        contract_path=contract,
        exit_status=exit_status,
        stdout=stdout,
        stderr=b"",
        started_at=now,
        finished_at=now + 0.2,
        harvested_files=harvested or {},
    )


def test_builtin_output_parses_identically(tmp_path):
    contract = tmp_path / "t.sol"
    contract.write_text(
        "pragma solidity ^0.4.24;\ncontract T { function f() public { uint t = now; } }\n"
    )
    tool = REGISTRY.get("builtin-smartcheck-ext")
    raw = run_task(
        AnalysisTask(tool=tool, contract_path=contract, image=tool.image_default, timeout=10),
        LocalProcessRuntime(programs={}),
    )
    report = parse_tool_output(tool, raw)
    assert report.success
    assert [f.rule_id for f in report.findings] == ["SOLIDITY_EXACT_TIME"]
    assert report.findings[0].severity is Severity.WARNING
    assert report.findings[0].dasp_category is DaspCategory.TIME_MANIPULATION


def test_mock_lines_format_two_issues(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    stdout = (
        b"mock-lines analyzer v1\n"
        b"issue reentrant_call line 10 call before state change\n"
        b"issue unchecked_send line 20-21 unchecked send\n"
        b"2 issues\n"
    )
    tool = REGISTRY.get("mock-lines")
    report = parse_tool_output(tool, raw_result("mock-lines", contract, stdout))
    assert report.success
    assert [(f.lines) for f in report.findings] == [(10, 10), (20, 21)]
    assert report.findings[0].dasp_category is DaspCategory.REENTRANCY
    assert report.findings[1].dasp_category is DaspCategory.UNCHECKED_LOW_LEVEL_CALLS


def test_garbage_output_fails_softly(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    tool = REGISTRY.get("mock-lines")
    report = parse_tool_output(tool, raw_result("mock-lines", contract, b"\x00\xff garbage"))
    assert not report.success
    assert report.findings == []
    assert len(report.parse_errors) >= 1


def test_summary_count_mismatch_is_reported():
    findings, errors = parse_mock_lines(b"issue a line 1 x\n5 issues\n")
    assert len(findings) == 1
    assert errors and "5" in errors[0]


def test_unknown_tool_falls_back_to_raw_parser(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    tool = ToolDescriptor(id="mystery", title="m", image_default="img", command="run")
    report = parse_tool_output(tool, raw_result("mystery", contract, b"whatever"))
    assert not report.success
    assert report.findings == []
    assert any("no parser registered" in e for e in report.parse_errors)


def test_harvested_file_preferred_over_stdout(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    tool = REGISTRY.get("mock-files")
    payload = json.dumps({"results": [{"rule": "destructible", "line": 7, "message": "boom"}]}).encode()
    raw = raw_result("mock-files", contract, b"wrote 1 results\n", harvested={"/results/output.json": payload})
    report = parse_tool_output(tool, raw)
    assert report.success
    assert report.findings[0].lines == (7, 7)
    assert raw_output_of(raw, tool) == payload


def test_missing_declared_output_file_is_an_error(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    tool = REGISTRY.get("mock-files")
    report = parse_tool_output(tool, raw_result("mock-files", contract, b"", harvested={}))
    assert not report.success
    assert any("not produced" in e for e in report.parse_errors)


def test_line_less_findings_get_zero_lines(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    tool = REGISTRY.get("mock-files")
    payload = json.dumps({"results": [{"rule": "destructible", "message": "contract-level"}]}).encode()
    raw = raw_result("mock-files", contract, b"", harvested={"/results/output.json": payload})
    report = parse_tool_output(tool, raw)
    assert report.findings[0].lines == (0, 0)


def test_timeout_marks_failure(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    tool = REGISTRY.get("mock-lines")
    report = parse_tool_output(tool, raw_result("mock-lines", contract, b"", exit_status=None))
    assert not report.success
    assert any("timeout" in e for e in report.parse_errors)


def test_map_to_dasp():
    assert map_to_dasp(DEFAULT_TAXONOMY, "builtin-smartcheck-ext", "SOLIDITY_BAD_RANDOMNESS") is DaspCategory.BAD_RANDOMNESS
    assert map_to_dasp(DEFAULT_TAXONOMY, "builtin-smartcheck-ext", "SOLIDITY_EXACT_TIME") is DaspCategory.TIME_MANIPULATION
    assert map_to_dasp(DEFAULT_TAXONOMY, "anytool", "unheard_of_rule") is DaspCategory.OTHER


# -- write/read round trip --------------------------------------------------------


def sample_report(contract: Path, findings=(), success=True, errors=()):
    return NormalizedReport(
        tool_id="mock-lines",
        contract_path=contract,
        contract_sha256="ab" * 32,
        success=success,
        duration=0,
        findings=list(findings),
        parse_errors=list(errors),
    )


def test_write_creates_both_files_and_round_trips(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    finding = Finding(
        rule_id="reentrant_call",
        dasp_category=DaspCategory.REENTRANCY,
        contract_path=contract,
        lines=(3, 4),
        message="call before state change",
        snippet="msg.sender.call.value(x)()",
        origin="mock-lines",
    )
    report = sample_report(contract, [finding])
    out = tmp_path / "out"
    write_report(report, out, b"raw bytes \x01")
    assert (out / RESULT_FILE).is_file() and (out / RAW_FILE).is_file()
    assert (out / RAW_FILE).read_bytes() == b"raw bytes \x01"
    assert read_report(out) == report


def test_zero_findings_serializes_empty_list_key(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    out = tmp_path / "out"
    write_report(sample_report(contract), out)
    data = json.loads((out / RESULT_FILE).read_text())
    assert data["findings"] == []
    assert data["errors"] == []


def test_rewrite_replaces_previous_files(tmp_path):
    contract = tmp_path / "c.sol"
    contract.write_text("x\n")
    out = tmp_path / "out"
    write_report(sample_report(contract), out, b"first")
    write_report(sample_report(contract, success=False, errors=["later"]), out, b"second")
    assert (out / RAW_FILE).read_bytes() == b"second"
    assert read_report(out).success is False
    assert len(list(out.iterdir())) == 2  # no temp-file litter


_FINDINGS = st.builds(
    Finding,
    rule_id=st.sampled_from(["a_rule", "b_rule"]),
    dasp_category=st.sampled_from(list(DaspCategory)),
    contract_path=st.just(Path("c.sol")),
    lines=st.tuples(st.integers(0, 500), st.integers(0, 500)).map(
        lambda t: (min(t), max(t))
    ),
    message=st.text(max_size=40),
    snippet=st.text(max_size=40),
    severity=st.sampled_from([None, Severity.WARNING, Severity.ERROR]),
    origin=st.just("a-tool"),
)


@given(
    findings=st.lists(_FINDINGS, max_size=5),
    success=st.booleans(),
    duration=st.integers(0, 10_000),
    errors=st.lists(st.text(max_size=30), max_size=3),
)
def test_round_trip_property(tmp_path_factory, findings, success, duration, errors):
    report = NormalizedReport(
        tool_id="a-tool",
        contract_path=Path("c.sol"),
        contract_sha256="00" * 32,
        success=success,
        duration=duration,
        findings=findings,
        parse_errors=errors,
    )
    out = tmp_path_factory.mktemp("roundtrip")
    write_report(report, out, b"")
    assert read_report(out) == report
