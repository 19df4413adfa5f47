"""Task execution against a container runtime or the local process stub."""

from solsweep.executor.runtime import (
    ContainerRuntime,
    DockerRuntime,
    ImageMissing,
    LocalProcessRuntime,
    RuntimeResult,
    RuntimeUnavailable,
)
from solsweep.executor.tasks import AnalysisTask, RawResult, run_task
from solsweep.executor.batch import (
    BatchSummary,
    has_result,
    make_run_stamp,
    result_dir,
    run_batch,
)

__all__ = [
    "ContainerRuntime",
    "DockerRuntime",
    "LocalProcessRuntime",
    "RuntimeResult",
    "RuntimeUnavailable",
    "ImageMissing",
    "AnalysisTask",
    "RawResult",
    "run_task",
    "BatchSummary",
    "run_batch",
    "result_dir",
    "has_result",
    "make_run_stamp",
]
