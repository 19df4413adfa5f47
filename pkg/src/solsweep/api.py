"""HTTP facade over the registry, executor and normalizer.

Endpoints: POST /analyze, GET /runs/{id}, GET /tools, GET /datasets.
A run analyzes pasted or uploaded contract text, or one of the bundled
named datasets, with the selected tools; results use the same normalized
report schema the CLI writes, so the service never re-implements analysis.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from solsweep.datasets import default_datasets, resolve_dataset
from solsweep.executor.batch import run_batch
from solsweep.executor.runtime import pick_runtime
from solsweep.registry import Registry, default_registry
from solsweep.taxonomy import DaspCategory

MAX_BODY_BYTES = 1024 * 1024

_STATUS_ORDER = ["queued", "running", "done", "failed"]


@dataclass
class RunRecord:
    run_id: str
    status: str
    tool_ids: list[str]
    submitted: dict
    reports: list[dict] = field(default_factory=list)
    error: str | None = None

    def advance(self, new_status: str) -> None:
        # transitions move forward only
        if _STATUS_ORDER.index(new_status) < _STATUS_ORDER.index(self.status):
            raise ValueError(f"illegal transition {self.status} -> {new_status}")
        self.status = new_status


class AnalyzeRequest(BaseModel):
    source: str | None = None
    filename: str | None = None
    dataset: str | None = None
    tools: list[str]


class RunStore:
    def __init__(self, persist_dir: Path | None = None):
        self._runs: dict[str, RunRecord] = {}
        self._lock = threading.Lock()
        self._persist_dir = persist_dir
        if persist_dir is not None:
            persist_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(persist_dir.glob("*.json")):
                try:
                    data = json.loads(path.read_text(encoding="utf-8"))
                    record = RunRecord(**data)
                    self._runs[record.run_id] = record
                except (json.JSONDecodeError, TypeError, ValueError):
                    continue

    def create(self, record: RunRecord) -> None:
        with self._lock:
            self._runs[record.run_id] = record

    def get(self, run_id: str) -> RunRecord | None:
        with self._lock:
            return self._runs.get(run_id)

    def update(self, run_id: str, status: str, reports: list[dict] | None = None, error: str | None = None) -> None:
        with self._lock:
            record = self._runs[run_id]
            record.advance(status)
            if reports is not None:
                record.reports = reports
            if error is not None:
                record.error = error
            terminal = status in ("done", "failed")
        if terminal and self._persist_dir is not None:
            payload = json.dumps(record.__dict__, indent=2, default=str)
            (self._persist_dir / f"{run_id}.json").write_text(payload, encoding="utf-8")


def _summarize(reports: list[dict]) -> dict:
    by_tool: dict[str, dict] = {}
    for report in reports:
        entry = by_tool.setdefault(
            report["tool"], {"total": 0, "by_category": {c.label: 0 for c in DaspCategory}}
        )
        for finding in report.get("findings", []):
            entry["total"] += 1
            category = finding.get("category", DaspCategory.OTHER.label)
            entry["by_category"][category] = entry["by_category"].get(category, 0) + 1
    return {"by_tool": by_tool}


def create_app(
    registry: Registry | None = None,
    runtime_preference: str = "auto",
    persist_dir: str | Path | None = None,
    workers: int = 2,
) -> FastAPI:
    app = FastAPI(title="solsweep", version="0.1.0")
    origins = os.environ.get("SOLSWEEP_CORS_ORIGINS", "*").split(",")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[o.strip() for o in origins],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    reg = registry or default_registry()
    store = RunStore(Path(persist_dir) if persist_dir else None)
    pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="solsweep-run")
    scratch_root = Path(tempfile.mkdtemp(prefix="solsweep-api-"))
    app.state.store = store

    def _validate_tools(tool_ids: list[str]) -> None:
        if not tool_ids:
            raise HTTPException(status_code=400, detail="select at least one tool")
        known = set(reg.ids())
        for tool_id in tool_ids:
            if tool_id not in known:
                raise HTTPException(status_code=400, detail=f"unknown tool: {tool_id}")

    def _schedule(record: RunRecord, contracts: list[Path]) -> None:
        store.create(record)
        pool.submit(_execute, record.run_id, list(record.tool_ids), contracts)

    def _execute(run_id: str, tool_ids: list[str], contracts: list[Path]) -> None:
        try:
            store.update(run_id, "running")
            tools = [reg.get(t) for t in tool_ids]
            runtime = pick_runtime(runtime_preference)
            out_dir = scratch_root / run_id / "results"
            summary = run_batch(tools, contracts, runtime, out_dir=out_dir)
            reports = [r.to_dict() for r in summary.reports]
            if summary.failed:
                store.update(run_id, "failed", reports=reports, error="; ".join(summary.errors))
            else:
                store.update(run_id, "done", reports=reports)
        except Exception as exc:  # surface anything unexpected on the record
            store.update(run_id, "failed", error=str(exc))

    @app.post("/analyze")
    async def analyze(request: AnalyzeRequest) -> dict:
        _validate_tools(request.tools)
        if request.dataset:
            return _analyze_dataset(request)
        source = request.source or ""
        if not source.strip():
            raise HTTPException(status_code=400, detail="empty contract source")
        if len(source.encode("utf-8")) > MAX_BODY_BYTES:
            raise HTTPException(status_code=413, detail="contract source exceeds 1 MiB")
        run_id = uuid.uuid4().hex
        name = Path(request.filename or "contract.sol").name or "contract.sol"
        run_dir = scratch_root / run_id
        run_dir.mkdir(parents=True)
        contract = run_dir / name
        contract.write_text(source, encoding="utf-8")
        kind = "file" if request.filename else "paste"
        record = RunRecord(
            run_id=run_id,
            status="queued",
            tool_ids=list(request.tools),
            submitted={"kind": kind, "name": name},
        )
        _schedule(record, [contract])
        return {"run_id": run_id, "status": record.status}

    def _analyze_dataset(request: AnalyzeRequest) -> dict:
        datasets = default_datasets()
        if request.dataset not in datasets:
            raise HTTPException(status_code=400, detail=f"unknown dataset: {request.dataset}")
        contracts = resolve_dataset(request.dataset, datasets)
        run_id = uuid.uuid4().hex
        record = RunRecord(
            run_id=run_id,
            status="queued",
            tool_ids=list(request.tools),
            submitted={"kind": "dataset", "name": request.dataset},
        )
        _schedule(record, contracts)
        return {"run_id": run_id, "status": record.status}

    @app.get("/runs/{run_id}")
    async def get_run(run_id: str) -> dict:
        record = store.get(run_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown run: {run_id}")
        body = {
            "run_id": record.run_id,
            "status": record.status,
            "tools": record.tool_ids,
            "submitted": record.submitted,
            "error": record.error,
            "reports": record.reports,
        }
        if record.status == "done":
            body["summary"] = _summarize(record.reports)
        return body

    @app.get("/tools")
    async def get_tools() -> list[dict]:
        return [
            {"id": t.id, "title": t.title, "description": t.description}
            for t in reg.all()
        ]

    @app.get("/datasets")
    async def get_datasets() -> list[dict]:
        datasets = default_datasets()
        out = []
        for name in sorted(datasets):
            try:
                count = len(resolve_dataset(name, datasets))
            except Exception:
                count = 0
            out.append({"name": name, "contracts": count})
        return out

    @app.middleware("http")
    async def body_size_guard(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and length.isdigit() and int(length) > MAX_BODY_BYTES + 4096:
            from fastapi.responses import JSONResponse

            return JSONResponse(status_code=413, content={"detail": "request body too large"})
        return await call_next(request)

    return app


def main(argv: list[str] | None = None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="python -m solsweep.api")
    parser.add_argument("--host", default=os.environ.get("SOLSWEEP_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("SOLSWEEP_PORT", "8730")))
    ns = parser.parse_args(argv)
    uvicorn.run(create_app(), host=ns.host, port=ns.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
