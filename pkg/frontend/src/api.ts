import type { AnalyzeRequest, DatasetInfo, RunBody, ToolInfo } from "./types";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

declare global {
  interface Window {
    SOLSWEEP_API?: string;
  }
}

export function defaultApiBase(): string {
  if (typeof window !== "undefined") {
    if (window.SOLSWEEP_API) return window.SOLSWEEP_API;
    const stored = window.localStorage?.getItem("solsweep.api");
    if (stored) return stored;
  }
  return "http://127.0.0.1:8730";
}

export class ApiClient {
  constructor(public base: string = defaultApiBase()) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.base}${path}`, init);
    if (!response.ok) {
      let detail = `${response.status} ${response.statusText}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getTools(): Promise<ToolInfo[]> {
    return this.request<ToolInfo[]>("/tools");
  }

  getDatasets(): Promise<DatasetInfo[]> {
    return this.request<DatasetInfo[]>("/datasets");
  }

  getRun(runId: string): Promise<RunBody> {
    return this.request<RunBody>(`/runs/${encodeURIComponent(runId)}`);
  }

  async analyze(request: AnalyzeRequest): Promise<{ run_id: string; status: string }> {
    return this.request("/analyze", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
  }
}
