import { ApiClient } from "./api";
import { pollRun } from "./poll";
import { renderEntry, renderError, renderRunView } from "./render";
import { toRunView } from "./view";
import type { DatasetInfo, ToolInfo } from "./types";

export interface AppOptions {
  pollIntervalMs?: number;
  pollMaxIntervalMs?: number;
}

export interface App {
  /** Resolves when the run opened by the last submission reaches a terminal state. */
  lastRunSettled: () => Promise<void>;
  showEntry: () => Promise<void>;
  root: HTMLElement;
}

export function createApp(
  root: HTMLElement,
  client: ApiClient = new ApiClient(),
  options: AppOptions = {},
): App {
  let tools: ToolInfo[] = [];
  let datasets: DatasetInfo[] = [];
  let lastSource = "";
  let settled: Promise<void> = Promise.resolve();

  async function showEntry(): Promise<void> {
    try {
      [tools, datasets] = await Promise.all([client.getTools(), client.getDatasets()]);
    } catch (err) {
      root.innerHTML = "";
      renderError(root, `cannot reach the analysis service: ${String(err)}`, () => {
        void showEntry();
      });
      return;
    }
    renderEntry(
      root,
      tools,
      datasets,
      {
        onPaste: (source, selected) => submit({ source, tools: selected }),
        onUpload: (source, filename, selected) =>
          submit({ source, filename, tools: selected }),
        onDataset: (dataset, selected) => submit({ dataset, tools: selected }),
      },
      lastSource,
    );
  }

  function submit(request: {
    source?: string;
    filename?: string;
    dataset?: string;
    tools: string[];
  }): void {
    if (request.source !== undefined) lastSource = request.source;
    settled = (async () => {
      try {
        const { run_id } = await client.analyze(request);
        window.location.hash = `#/run/${run_id}`;
        await openRun(run_id);
      } catch (err) {
        renderError(root, String(err));
      }
    })();
  }

  async function openRun(runId: string): Promise<void> {
    const handlers = {
      onEditRerun: () => {
        window.location.hash = "";
        void showEntry();
      },
      onBack: () => {
        window.location.hash = "";
        void showEntry();
      },
    };
    try {
      const finished = await pollRun(client, runId, {
        intervalMs: options.pollIntervalMs ?? 1000,
        maxIntervalMs: options.pollMaxIntervalMs ?? 5000,
        onUpdate: (run) => renderRunView(root, toRunView(run), handlers),
      });
      renderRunView(root, toRunView(finished), handlers);
    } catch (err) {
      root.innerHTML = "";
      renderError(root, String(err), () => void openRun(runId));
    }
  }

  function route(): void {
    const match = window.location.hash.match(/^#\/run\/([0-9a-f-]+)$/);
    if (match) {
      settled = openRun(match[1]);
    } else {
      void showEntry();
    }
  }

  window.addEventListener("hashchange", route);
  route();

  return {
    lastRunSettled: () => settled,
    showEntry,
    root,
  };
}

// auto-boot in the browser; tests call createApp directly
const mount = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mount && !mount.dataset.testHarness) {
  createApp(mount);
}
