/** Job polling with a bounded interval (never faster than once per second). */

import type { ServiceClient } from "./api";
import type { JobStatus } from "./types";

export const MIN_POLL_INTERVAL_MS = 1000;

export interface PollOptions {
  intervalMs?: number;
  onStatus?: (status: JobStatus) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Poll until the job is done (resolves) or failed (rejects with the server
 * message). Each observed status is forwarded to onStatus.
 */
export async function pollJob(
  client: ServiceClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobStatus> {
  const interval = Math.max(options.intervalMs ?? MIN_POLL_INTERVAL_MS, MIN_POLL_INTERVAL_MS);
  const sleep = options.sleep ?? defaultSleep;
  for (;;) {
    const status = await client.getJob(jobId);
    options.onStatus?.(status);
    if (status.status === "done") {
      return status;
    }
    if (status.status === "failed") {
      throw new Error(status.error ?? "generation job failed");
    }
    await sleep(interval);
  }
}
