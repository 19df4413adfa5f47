import json
from pathlib import Path

import pytest

from conftest import FIXTURES_DIR
from solsweep.cli import Mode, UsageError, main, parse_args
from solsweep.datasets import bundled_corpus_dir


# -- parse_args ---------------------------------------------------------------


def test_usage_example_tools_and_dataset():
    inv = parse_args(["--tool", "oyente", "mythril", "--dataset", "reentrancy"])
    assert inv.mode is Mode.ANALYZE
    assert inv.tool_ids == ["oyente", "mythril"]
    assert inv.dataset_names == ["reentrancy"]
    assert inv.files == []
    assert inv.processes == 1 and inv.skip_existing is False


def test_list_tools_mode():
    inv = parse_args(["--list", "tools"])
    assert inv.mode is Mode.LIST and inv.list_target == "tools"


def test_file_and_dataset_together_rejected():
    with pytest.raises(UsageError):
        parse_args(["--file", "a.sol", "--dataset", "reentrancy"])


def test_neither_file_nor_dataset_rejected():
    with pytest.raises(UsageError):
        parse_args(["--tool", "x"])


def test_unknown_flag_rejected():
    with pytest.raises(UsageError):
        parse_args(["--frobnicate"])


def test_processes_must_be_positive():
    with pytest.raises(UsageError):
        parse_args(["--tool", "x", "--file", "a.sol", "--processes", "0"])


def test_skip_existing_and_processes_parsed():
    inv = parse_args(
        ["--tool", "x", "--dataset", "d", "--skip-existing", "--processes", "7"]
    )
    assert inv.skip_existing is True and inv.processes == 7


def test_info_mode():
    inv = parse_args(["--info", "mock-lines", "mock-files"])
    assert inv.mode is Mode.INFO
    assert inv.tool_ids == ["mock-lines", "mock-files"]


def test_list_cannot_combine_with_analysis():
    with pytest.raises(UsageError):
        parse_args(["--list", "tools", "--tool", "x"])


# -- main / execute -----------------------------------------------------------


def test_conflicting_selectors_exit_2_with_synopsis(capsys):
    code = main(["--file", "a.sol", "--dataset", "reentrancy"])
    captured = capsys.readouterr()
    assert code == 2
    assert "usage: solsweep" in captured.err


def test_unknown_tool_exit_2_names_it(tmp_path, capsys):
    contract = tmp_path / "a.sol"
    contract.write_text("contract A {}")
    code = main(["--file", str(contract), "--tool", "no-such-tool", "--runtime", "local"])
    captured = capsys.readouterr()
    assert code == 2
    assert "no-such-tool" in captured.err


def test_missing_file_exit_2(capsys):
    code = main(["--file", "definitely-missing.sol", "--tool", "mock-lines", "--runtime", "local"])
    assert code == 2


def test_list_tools_output(capsys):
    assert main(["--list", "tools"]) == 0
    out = capsys.readouterr().out
    assert "builtin-smartcheck-ext" in out
    assert "mock-lines" in out


def test_list_datasets_output(capsys):
    assert main(["--list", "datasets"]) == 0
    out = capsys.readouterr().out
    assert "fixtures" in out


def test_info_prints_descriptions_in_order(capsys):
    assert main(["--info", "mock-lines", "mock-files"]) == 0
    out = capsys.readouterr().out
    assert out.index("mock-lines") < out.index("mock-files")
    assert "Demo analyzer" in out


def test_info_unknown_tool_exit_2(capsys):
    assert main(["--info", "ghost-tool"]) == 2
    assert "ghost-tool" in capsys.readouterr().err


def test_analyze_fixtures_end_to_end(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code = main(
        ["--dataset", "fixtures", "--tool", "builtin-smartcheck-ext", "--runtime", "local"]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "executed 22" in captured.out
    assert "detection matrix for builtin-smartcheck-ext" in captured.out
    results = list((tmp_path / "results").rglob("result.json"))
    assert len(results) == 22
    assert list((tmp_path / "logs").glob("*.log"))
    matrices = list((tmp_path / "results").rglob("matrix.json"))
    assert len(matrices) == 1
    payload = json.loads(matrices[0].read_text())
    assert payload["total"]["annotated"] == 25


def test_skip_existing_second_run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    args = ["--dataset", "safe", "--tool", "mock-lines", "--runtime", "local"]
    assert main(args) == 0
    capsys.readouterr()
    assert main(args + ["--skip-existing"]) == 0
    out = capsys.readouterr().out
    assert "executed 0, skipped 2" in out


def test_exit_1_on_infrastructure_failure(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    contract = tmp_path / "a.sol"
    contract.write_text("pragma solidity ^0.4.24;\ncontract A {}")
    # securify's image is not registered with the local runtime
    code = main(["--file", str(contract), "--tool", "securify", "--runtime", "local"])
    captured = capsys.readouterr()
    assert code == 1
    assert "failed 1" in captured.out


# -- subcommands ----------------------------------------------------------------


def test_ir_dump_matches_golden(capsys):
    fixture = bundled_corpus_dir() / "access_control" / "guarded_vault.sol"
    assert main(["ir-dump", str(fixture)]) == 0
    out = capsys.readouterr().out
    golden = (FIXTURES_DIR / "golden" / "guarded_vault.txt").read_text()
    assert out == golden


def test_ir_dump_parse_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.sol"
    bad.write_text("contract A {")
    assert main(["ir-dump", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_rules_manifest_subcommand(capsys):
    assert main(["rules"]) == 0
    out = capsys.readouterr().out
    for rule_id in (
        "SOLIDITY_BAD_RANDOMNESS",
        "SOLIDITY_EXACT_TIME",
        "SOLIDITY_TX_ORIGIN",
        "SOLIDITY_UNPROTECTED",
    ):
        assert rule_id in out
    assert main(["rules", "--ruleset", "base"]) == 0
    base_out = capsys.readouterr().out
    assert "SOLIDITY_BAD_RANDOMNESS" not in base_out


def test_corpus_stats_subcommand(capsys):
    assert main(["corpus-stats"]) == 0
    out = capsys.readouterr().out
    assert "Bad Randomness" in out and "Total" in out


def test_score_subcommand(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["--dataset", "fixtures", "--tool", "builtin-smartcheck", "--runtime", "local"]) == 0
    capsys.readouterr()
    assert main(["score", "results"]) == 0
    out = capsys.readouterr().out
    assert "detection matrix for builtin-smartcheck" in out
    assert "Total" in out
