import type { ApiClient } from "./api";
import type { RunBody } from "./types";

const TERMINAL = new Set(["done", "failed"]);

export interface PollOptions {
  /** First wait between polls; grows by one interval per poll up to the cap. */
  intervalMs?: number;
  maxIntervalMs?: number;
  timeoutMs?: number;
  onUpdate?: (run: RunBody) => void;
  sleep?: (ms: number) => Promise<void>;
}

const realSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

/** Poll a run until it reaches a terminal state; resolves with the final body. */
export async function pollRun(
  client: Pick<ApiClient, "getRun">,
  runId: string,
  options: PollOptions = {},
): Promise<RunBody> {
  const start = options.intervalMs ?? 1000;
  const cap = options.maxIntervalMs ?? 5000;
  const timeout = options.timeoutMs ?? 10 * 60 * 1000;
  const sleep = options.sleep ?? realSleep;
  let interval = start;
  let waited = 0;
  for (;;) {
    const run = await client.getRun(runId);
    options.onUpdate?.(run);
    if (TERMINAL.has(run.status)) return run;
    if (waited >= timeout) throw new Error(`run ${runId} did not finish within ${timeout}ms`);
    await sleep(interval);
    waited += interval;
    interval = Math.min(interval + start, cap);
  }
}
