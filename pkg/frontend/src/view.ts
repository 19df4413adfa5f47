import type { FindingDto, RunBody } from "./types";

export interface CategoryGroup {
  label: string;
  findings: FindingDto[];
}

export interface ToolView {
  tool: string;
  total: number;
  groups: CategoryGroup[];
  toolErrors: string[];
}

export interface ContractRow {
  contract: string;
  tool: string;
  findingCount: number;
  success: boolean;
}

export interface UiRunView {
  runId: string;
  status: string;
  error: string | null;
  submitted: { kind: string; name: string };
  perTool: ToolView[];
  contracts: ContractRow[];
}

/** Group the API's reports per tool and per DASP category, without re-categorizing. */
export function toRunView(run: RunBody): UiRunView {
  const perTool: ToolView[] = run.tools.map((tool) => {
    const reports = run.reports.filter((r) => r.tool === tool);
    const byCategory = new Map<string, FindingDto[]>();
    for (const report of reports) {
      for (const finding of report.findings) {
        const bucket = byCategory.get(finding.category) ?? [];
        bucket.push(finding);
        byCategory.set(finding.category, bucket);
      }
    }
    const groups = [...byCategory.entries()]
      .sort(([a], [b]) => a.localeCompare(b))
      .map(([label, findings]) => ({ label, findings }));
    const total = groups.reduce((n, g) => n + g.findings.length, 0);
    const toolErrors = reports.flatMap((r) => r.errors);
    return { tool, total, groups, toolErrors };
  });
  const contracts: ContractRow[] = run.reports.map((r) => ({
    contract: r.contract.split("/").pop() ?? r.contract,
    tool: r.tool,
    findingCount: r.findings.length,
    success: r.success,
  }));
  return {
    runId: run.run_id,
    status: run.status,
    error: run.error,
    submitted: run.submitted,
    perTool,
    contracts,
  };
}
