import type { DatasetInfo, ToolInfo } from "./types";
import type { ToolView, UiRunView } from "./view";

export interface SubmitHandlers {
  onPaste: (source: string, tools: string[]) => void;
  onUpload: (source: string, filename: string, tools: string[]) => void;
  onDataset: (dataset: string, tools: string[]) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function selectedTools(form: HTMLElement): string[] {
  return [...form.querySelectorAll<HTMLInputElement>("input[data-tool]:checked")].map(
    (box) => box.dataset.tool as string,
  );
}

/** The three-option entry screen: paste, upload, or pick a dataset. */
export function renderEntry(
  root: HTMLElement,
  tools: ToolInfo[],
  datasets: DatasetInfo[],
  handlers: SubmitHandlers,
  prefill = "",
): void {
  root.innerHTML = "";
  const form = el("div", "entry");

  const toolBox = el("fieldset", "tools");
  toolBox.appendChild(el("legend", "", "Tools"));
  for (const tool of tools) {
    const label = el("label", "tool-option");
    const box = el("input");
    box.type = "checkbox";
    box.dataset.tool = tool.id;
    if (tool.id === "builtin-smartcheck-ext") box.checked = true;
    label.appendChild(box);
    label.appendChild(el("span", "", ` ${tool.id}`));
    label.title = tool.description;
    toolBox.appendChild(label);
  }
  form.appendChild(toolBox);

  const pasteSection = el("section", "option paste");
  pasteSection.appendChild(el("h2", "", "Paste or write a contract"));
  const editor = el("textarea", "editor");
  editor.id = "editor";
  editor.rows = 14;
  editor.spellcheck = false;
  editor.value = prefill;
  editor.placeholder = "pragma solidity ^0.4.24;\ncontract ... { }";
  pasteSection.appendChild(editor);
  const analyzeButton = el("button", "primary", "Analyze");
  analyzeButton.id = "analyze-paste";
  analyzeButton.addEventListener("click", () => {
    handlers.onPaste(editor.value, selectedTools(form));
  });
  pasteSection.appendChild(analyzeButton);
  form.appendChild(pasteSection);

  const uploadSection = el("section", "option upload");
  uploadSection.appendChild(el("h2", "", "Upload a contract file"));
  const fileInput = el("input");
  fileInput.type = "file";
  fileInput.id = "upload";
  fileInput.accept = ".sol";
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const reader = new FileReader();
    reader.onload = () => {
      handlers.onUpload(String(reader.result ?? ""), file.name, selectedTools(form));
    };
    reader.readAsText(file);
  });
  uploadSection.appendChild(fileInput);
  form.appendChild(uploadSection);

  const datasetSection = el("section", "option dataset");
  datasetSection.appendChild(el("h2", "", "Run on a pre-defined dataset"));
  const picker = el("select");
  picker.id = "dataset-picker";
  for (const dataset of datasets) {
    const option = el("option", "", `${dataset.name} (${dataset.contracts} contracts)`);
    option.value = dataset.name;
    picker.appendChild(option);
  }
  datasetSection.appendChild(picker);
  const datasetButton = el("button", "", "Analyze dataset");
  datasetButton.id = "analyze-dataset";
  datasetButton.addEventListener("click", () => {
    if (picker.value) handlers.onDataset(picker.value, selectedTools(form));
  });
  datasetSection.appendChild(datasetButton);
  form.appendChild(datasetSection);

  root.appendChild(form);
}

export function renderError(root: HTMLElement, message: string, onRetry?: () => void): void {
  const banner = el("div", "banner error");
  banner.appendChild(el("span", "", message));
  if (onRetry) {
    const retry = el("button", "retry", "Retry");
    retry.addEventListener("click", onRetry);
    banner.appendChild(retry);
  }
  root.prepend(banner);
}

/** One bar per tool; clicking a bar reveals that tool's finding list. */
export function renderChart(
  container: HTMLElement,
  view: UiRunView,
  onSelect: (tool: string) => void,
): void {
  container.innerHTML = "";
  const chart = el("div", "chart");
  chart.id = "chart";
  for (const toolView of view.perTool) {
    const group = el("div", "bar-group");
    const bar = el("div", "bar");
    bar.dataset.tool = toolView.tool;
    bar.dataset.count = String(toolView.total);
    bar.style.height = `${Math.max(toolView.total * 24, 2)}px`;
    bar.title = `${toolView.tool}: ${toolView.total} issue(s)`;
    bar.addEventListener("click", () => onSelect(toolView.tool));
    group.appendChild(bar);
    group.appendChild(el("div", "bar-count", String(toolView.total)));
    group.appendChild(el("div", "bar-label", toolView.tool));
    chart.appendChild(group);
  }
  container.appendChild(chart);
}

function renderToolFindings(container: HTMLElement, toolView: ToolView): void {
  container.innerHTML = "";
  container.appendChild(el("h3", "", `Issues found by ${toolView.tool}`));
  if (toolView.toolErrors.length) {
    const errors = el("div", "tool-errors");
    for (const message of toolView.toolErrors) {
      errors.appendChild(el("div", "tool-error", message));
    }
    container.appendChild(errors);
  }
  if (!toolView.groups.length) {
    container.appendChild(el("p", "empty", "No issues found."));
    return;
  }
  for (const group of toolView.groups) {
    const section = el("section", "category-group");
    section.dataset.category = group.label;
    section.appendChild(el("h4", "", `${group.label} (${group.findings.length})`));
    const list = el("ul", "findings");
    for (const finding of group.findings) {
      const item = el("li", "finding");
      const where =
        finding.line_start > 0
          ? `line ${finding.line_start}${finding.line_end > finding.line_start ? `-${finding.line_end}` : ""}`
          : "contract level";
      item.appendChild(el("span", "rule", finding.rule));
      item.appendChild(el("span", "where", ` @ ${where}: `));
      item.appendChild(el("span", "message", finding.message));
      if (finding.snippet) item.appendChild(el("code", "snippet", finding.snippet));
      list.appendChild(item);
    }
    section.appendChild(list);
    container.appendChild(section);
  }
}

export interface RunViewHandlers {
  onEditRerun: () => void;
  onBack: () => void;
}

export function renderRunView(
  root: HTMLElement,
  view: UiRunView,
  handlers: RunViewHandlers,
): void {
  root.innerHTML = "";
  const page = el("div", "run-view");
  page.dataset.run = view.runId;

  const header = el("div", "run-header");
  header.appendChild(
    el("h2", "", `Run ${view.submitted.kind}: ${view.submitted.name}`),
  );
  const status = el("span", `status status-${view.status}`, view.status);
  status.id = "run-status";
  header.appendChild(status);
  const back = el("button", "", "New analysis");
  back.id = "back";
  back.addEventListener("click", handlers.onBack);
  header.appendChild(back);
  if (view.submitted.kind !== "dataset") {
    const rerun = el("button", "", "Edit & rerun");
    rerun.id = "edit-rerun";
    rerun.addEventListener("click", handlers.onEditRerun);
    header.appendChild(rerun);
  }
  page.appendChild(header);

  if (view.status === "failed") {
    const banner = el("div", "banner error", view.error ?? "run failed");
    banner.id = "run-error";
    page.appendChild(banner);
    root.appendChild(page);
    return; // no chart for failed runs
  }
  if (view.status !== "done") {
    page.appendChild(el("div", "banner progress", `analysis ${view.status}...`));
    root.appendChild(page);
    return;
  }

  const chartArea = el("div", "chart-area");
  const detailArea = el("div", "detail-area");
  detailArea.id = "findings";
  const select = (tool: string) => {
    const toolView = view.perTool.find((t) => t.tool === tool);
    if (toolView) renderToolFindings(detailArea, toolView);
  };
  renderChart(chartArea, view, select);
  page.appendChild(chartArea);
  page.appendChild(detailArea);
  if (view.perTool.length) select(view.perTool[0].tool);

  if (view.submitted.kind === "dataset") {
    const table = el("table", "contracts");
    const head = el("tr");
    for (const title of ["Contract", "Tool", "Findings", "OK"]) {
      head.appendChild(el("th", "", title));
    }
    table.appendChild(head);
    for (const row of view.contracts) {
      const tr = el("tr", row.success ? "" : "report-failed");
      tr.appendChild(el("td", "", row.contract));
      tr.appendChild(el("td", "", row.tool));
      tr.appendChild(el("td", "", String(row.findingCount)));
      tr.appendChild(el("td", "", row.success ? "yes" : "no"));
      table.appendChild(tr);
    }
    page.appendChild(table);
  }

  root.appendChild(page);
}
