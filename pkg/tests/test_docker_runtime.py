"""DockerRuntime command plumbing, exercised through a fake docker binary."""

import os
import stat
from pathlib import Path

import pytest

from solsweep.executor import AnalysisTask, DockerRuntime, ImageMissing, run_task
from solsweep.registry.descriptor import ToolDescriptor

FAKE_DOCKER = """#!/bin/sh
echo "$@" >> "$FAKE_DOCKER_LOG"
cmd="$1"; shift
case "$cmd" in
  version) echo 24.0.0; exit 0 ;;
  image) exit {inspect_rc} ;;
  pull) exit {pull_rc} ;;
  create) echo cafebabe0001; exit 0 ;;
  start) {start_behavior} ;;
  cp) cp "$FAKE_DOCKER_HARVEST" "$2" 2>/dev/null; exit $? ;;
  rm) exit 0 ;;
  *) echo "unexpected: $cmd" >&2; exit 9 ;;
esac
"""


@pytest.fixture()
def contract(tmp_path):
    path = tmp_path / "c.sol"
    path.write_text("pragma solidity ^0.4.24;\ncontract C {}\n")
    return path


def install_fake(tmp_path, monkeypatch, inspect_rc=0, pull_rc=1, start_behavior='echo "2 issues"; exit 0'):
    script = tmp_path / "fake-docker"
    script.write_text(
        FAKE_DOCKER.format(inspect_rc=inspect_rc, pull_rc=pull_rc, start_behavior=start_behavior)
    )
    script.chmod(script.stat().st_mode | stat.S_IXUSR)
    log = tmp_path / "docker.log"
    log.write_text("")
    monkeypatch.setenv("FAKE_DOCKER_LOG", str(log))
    return str(script), log


def lines_tool(output_file=None):
    return ToolDescriptor(
        id="mock-lines",
        title="t",
        image_default="some/image",
        command="{contract}",
        output_file=output_file,
    )


def test_lifecycle_create_start_remove(tmp_path, monkeypatch, contract):
    docker_bin, log = install_fake(tmp_path, monkeypatch)
    runtime = DockerRuntime(docker_bin=docker_bin)
    assert runtime.available()
    task = AnalysisTask(tool=lines_tool(), contract_path=contract, image="some/image", timeout=10)
    raw = run_task(task, runtime)
    assert raw.exit_status == 0
    assert b"2 issues" in raw.stdout
    calls = [line.split()[0] for line in log.read_text().splitlines()]
    assert "create" in calls and "start" in calls and "rm" in calls
    assert calls.index("create") < calls.index("start") < len(calls)
    create_line = next(line for line in log.read_text().splitlines() if line.startswith("create"))
    assert f"{contract.resolve()}:/sol/{contract.name}:ro" in create_line
    assert create_line.rstrip().endswith(f"/sol/{contract.name}")


def test_missing_image_after_failed_pull(tmp_path, monkeypatch, contract):
    docker_bin, _ = install_fake(tmp_path, monkeypatch, inspect_rc=1, pull_rc=1)
    runtime = DockerRuntime(docker_bin=docker_bin)
    task = AnalysisTask(tool=lines_tool(), contract_path=contract, image="gone/image", timeout=10)
    with pytest.raises(ImageMissing):
        run_task(task, runtime)


def test_pull_attempted_once_before_giving_up(tmp_path, monkeypatch, contract):
    docker_bin, log = install_fake(tmp_path, monkeypatch, inspect_rc=1, pull_rc=1)
    runtime = DockerRuntime(docker_bin=docker_bin)
    task = AnalysisTask(tool=lines_tool(), contract_path=contract, image="gone/image", timeout=10)
    with pytest.raises(ImageMissing):
        run_task(task, runtime)
    calls = [line.split()[0] for line in log.read_text().splitlines()]
    assert calls.count("pull") == 1


def test_timeout_kills_and_removes_container(tmp_path, monkeypatch, contract):
    docker_bin, log = install_fake(
        tmp_path, monkeypatch, start_behavior="sleep 30; exit 0"
    )
    runtime = DockerRuntime(docker_bin=docker_bin)
    task = AnalysisTask(tool=lines_tool(), contract_path=contract, image="some/image", timeout=1.0)
    raw = run_task(task, runtime)
    assert raw.exit_status is None and raw.timed_out
    assert raw.duration < 10
    calls = [line.split()[0] for line in log.read_text().splitlines()]
    assert "rm" in calls  # force-removed after the timeout


def test_harvest_via_docker_cp(tmp_path, monkeypatch, contract):
    harvest_source = tmp_path / "result-in-container.json"
    harvest_source.write_text('{"results": []}')
    monkeypatch.setenv("FAKE_DOCKER_HARVEST", str(harvest_source))
    docker_bin, _ = install_fake(tmp_path, monkeypatch, start_behavior='echo ok; exit 0')
    runtime = DockerRuntime(docker_bin=docker_bin)
    tool = lines_tool(output_file="/results/output.json")
    task = AnalysisTask(tool=tool, contract_path=contract, image="some/image", timeout=10)
    raw = run_task(task, runtime)
    assert raw.harvested_files == {"/results/output.json": b'{"results": []}'}


def test_unavailable_engine_reports_unavailable(tmp_path, contract):
    runtime = DockerRuntime(docker_bin=str(tmp_path / "not-a-docker"))
    assert not runtime.available()
