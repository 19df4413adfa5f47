// Shapes served by the solsweep HTTP API.

export interface ToolInfo {
  id: string;
  title: string;
  description: string;
}

export interface DatasetInfo {
  name: string;
  contracts: number;
}

export interface FindingDto {
  rule: string;
  category: string;
  line_start: number;
  line_end: number;
  message: string;
  snippet: string;
  severity?: string;
}

export interface ReportDto {
  tool: string;
  contract: string;
  success: boolean;
  duration: number;
  findings: FindingDto[];
  errors: string[];
}

export type RunStatus = "queued" | "running" | "done" | "failed";

export interface RunBody {
  run_id: string;
  status: RunStatus;
  tools: string[];
  submitted: { kind: string; name: string };
  error: string | null;
  reports: ReportDto[];
  summary?: {
    by_tool: Record<string, { total: number; by_category: Record<string, number> }>;
  };
}

export interface AnalyzeRequest {
  source?: string;
  filename?: string;
  dataset?: string;
  tools: string[];
}
