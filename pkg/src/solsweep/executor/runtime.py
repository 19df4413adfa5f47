"""Container runtime abstraction: a Docker-engine client and a process stub.

Tools address their inputs through two fixed in-container paths: the
contract is mounted read-only under /sol and results are written under
/results. The local process stub reproduces those semantics on the host
filesystem, mapping /sol and /results arguments into a per-task scratch
directory, so the whole pipeline runs without a container engine.
"""

from __future__ import annotations

import shutil
import stat
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Protocol, Sequence

CONTRACT_MOUNT_DIR = "/sol"
RESULTS_MOUNT_DIR = "/results"

#: Images the local runtime maps to bundled demo analyzers.
MOCK_LINES_IMAGE = "solsweep/mock-lines"
MOCK_FILES_IMAGE = "solsweep/mock-files"


class RuntimeUnavailable(Exception):
    pass


class ImageMissing(Exception):
    def __init__(self, image: str):
        super().__init__(f"image not available: {image}")
        self.image = image


@dataclass
class RuntimeResult:
    exit_code: int | None  # None means the task hit its timeout
    stdout: bytes
    stderr: bytes
    harvested: dict[str, bytes] = field(default_factory=dict)

    @property
    def timed_out(self) -> bool:
        return self.exit_code is None


class ContainerRuntime(Protocol):
    name: str

    def available(self) -> bool: ...

    def run(
        self,
        image: str,
        args: Sequence[str],
        contract: Path,
        mount_path: str,
        timeout: float,
        harvest: Sequence[str] = (),
    ) -> RuntimeResult: ...


def _mock_program(script: str) -> list[str]:
    script_path = resources.files("solsweep") / "mocktools" / script
    return [sys.executable, str(script_path)]


class LocalProcessRuntime:
    """Runs registered executables with container-like mount semantics."""

    name = "local"

    def __init__(self, programs: dict[str, Sequence[str]] | None = None):
        self.programs: dict[str, Sequence[str]] = {
            MOCK_LINES_IMAGE: _mock_program("scan_lines.py"),
            MOCK_FILES_IMAGE: _mock_program("scan_files.py"),
        }
        if programs:
            self.programs.update(programs)

    def register(self, image: str, argv: Sequence[str]) -> None:
        self.programs[image] = list(argv)

    def available(self) -> bool:
        return True

    def run(
        self,
        image: str,
        args: Sequence[str],
        contract: Path,
        mount_path: str,
        timeout: float,
        harvest: Sequence[str] = (),
    ) -> RuntimeResult:
        if image not in self.programs:
            raise ImageMissing(image)
        with tempfile.TemporaryDirectory(prefix="solsweep-task-") as scratch:
            scratch_path = Path(scratch)
            sol_dir = scratch_path / "sol"
            results_dir = scratch_path / "results"
            sol_dir.mkdir()
            results_dir.mkdir()
            mounted = sol_dir / Path(mount_path).name
            shutil.copyfile(contract, mounted)
            mounted.chmod(stat.S_IRUSR | stat.S_IRGRP | stat.S_IROTH)  # read-only mount

            def translate(container_path: str) -> str:
                if container_path == mount_path or container_path.startswith(CONTRACT_MOUNT_DIR + "/"):
                    return str(sol_dir / Path(container_path).name)
                if container_path == RESULTS_MOUNT_DIR:
                    return str(results_dir)
                if container_path.startswith(RESULTS_MOUNT_DIR + "/"):
                    return str(results_dir / container_path[len(RESULTS_MOUNT_DIR) + 1 :])
                return container_path

            argv = [*self.programs[image], *(translate(a) for a in args)]
            try:
                proc = subprocess.run(
                    argv,
                    capture_output=True,
                    timeout=timeout,
                    cwd=scratch,
                )
                exit_code: int | None = proc.returncode
                stdout, stderr = proc.stdout, proc.stderr
            except subprocess.TimeoutExpired as exc:
                exit_code = None
                stdout = exc.stdout or b""
                stderr = exc.stderr or b""
            except FileNotFoundError as exc:
                raise ImageMissing(image) from exc
            harvested = {}
            for container_path in harvest:
                host_path = Path(translate(container_path))
                if host_path.is_file():
                    harvested[container_path] = host_path.read_bytes()
            return RuntimeResult(exit_code, stdout, stderr, harvested)


class DockerRuntime:
    """Runs tools through the Docker engine via the docker CLI.

    Lifecycle per task: create -> start (attached) -> copy-out -> remove;
    a task that exceeds its timeout is force-removed.
    """

    name = "docker"

    def __init__(self, docker_bin: str = "docker"):
        self.docker_bin = docker_bin

    def available(self) -> bool:
        if shutil.which(self.docker_bin) is None:
            return False
        proc = subprocess.run(
            [self.docker_bin, "version", "--format", "{{.Server.Version}}"],
            capture_output=True,
        )
        return proc.returncode == 0

    def _ensure_image(self, image: str) -> None:
        inspect = subprocess.run(
            [self.docker_bin, "image", "inspect", image], capture_output=True
        )
        if inspect.returncode == 0:
            return
        pull = subprocess.run([self.docker_bin, "pull", image], capture_output=True)
        if pull.returncode != 0:
            raise ImageMissing(image)

    def run(
        self,
        image: str,
        args: Sequence[str],
        contract: Path,
        mount_path: str,
        timeout: float,
        harvest: Sequence[str] = (),
    ) -> RuntimeResult:
        if not self.available():
            raise RuntimeUnavailable("docker engine is not reachable")
        self._ensure_image(image)
        create = subprocess.run(
            [
                self.docker_bin,
                "create",
                "-v",
                f"{contract.resolve()}:{mount_path}:ro",
                image,
                *args,
            ],
            capture_output=True,
        )
        if create.returncode != 0:
            raise RuntimeUnavailable(
                f"docker create failed: {create.stderr.decode(errors='replace').strip()}"
            )
        container_id = create.stdout.decode().strip()
        try:
            try:
                proc = subprocess.run(
                    [self.docker_bin, "start", "-a", container_id],
                    capture_output=True,
                    timeout=timeout,
                )
                exit_code: int | None = proc.returncode
                stdout, stderr = proc.stdout, proc.stderr
            except subprocess.TimeoutExpired as exc:
                exit_code = None
                stdout = exc.stdout or b""
                stderr = exc.stderr or b""
            harvested = {}
            for container_path in harvest:
                with tempfile.TemporaryDirectory() as tmp:
                    target = Path(tmp) / "harvest"
                    cp = subprocess.run(
                        [self.docker_bin, "cp", f"{container_id}:{container_path}", str(target)],
                        capture_output=True,
                    )
                    if cp.returncode == 0 and target.is_file():
                        harvested[container_path] = target.read_bytes()
            return RuntimeResult(exit_code, stdout, stderr, harvested)
        finally:
            subprocess.run(
                [self.docker_bin, "rm", "-f", container_id], capture_output=True
            )


def pick_runtime(preference: str = "auto") -> ContainerRuntime:
    """Resolve a runtime: 'docker', 'local', or 'auto' (docker when reachable)."""
    if preference == "docker":
        runtime = DockerRuntime()
        if not runtime.available():
            raise RuntimeUnavailable("docker requested but the engine is not reachable")
        return runtime
    if preference == "local":
        return LocalProcessRuntime()
    docker = DockerRuntime()
    return docker if docker.available() else LocalProcessRuntime()
