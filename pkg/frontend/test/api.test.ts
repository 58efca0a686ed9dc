import { describe, expect, it, vi } from "vitest";

import { ApiError, ServiceClient } from "../src/api";
import { MIN_POLL_INTERVAL_MS, pollJob } from "../src/poll";
import type { JobStatus } from "../src/types";
import { doneStatus, IDEAS, jsonResponse, SIX_DOMAINS } from "./fixtures";

describe("ServiceClient", () => {
  it("fetches ranked domains from /domains", async () => {
    const fetchMock = vi.fn(async (url: string) => {
      expect(url).toBe("http://svc/domains?target=rolling%20toys");
      return jsonResponse(SIX_DOMAINS);
    });
    const client = new ServiceClient("http://svc", fetchMock);
    const domains = await client.getDomains("rolling toys");
    expect(domains.map((d) => d.rank)).toEqual([1, 2, 3, 4, 5, 6]);
  });

  it("posts generation requests and returns the job id", async () => {
    const fetchMock = vi.fn(async (url: string, init?: RequestInit) => {
      expect(url).toBe("/generate");
      expect(init?.method).toBe("POST");
      const body = JSON.parse(String(init?.body));
      expect(body).toEqual({
        target_keyword: "rolling toy",
        domain_id: "weapons",
        n_samples: 500,
        seed: 7,
        temperature: 0.9,
        top_k: 50,
      });
      return jsonResponse({ job_id: "abc123" }, 202);
    });
    const client = new ServiceClient("", fetchMock);
    const accepted = await client.postGenerate({
      target_keyword: "rolling toy",
      domain_id: "weapons",
      n_samples: 500,
      seed: 7,
      temperature: 0.9,
      top_k: 50,
    });
    expect(accepted.job_id).toBe("abc123");
  });

  it("surfaces server detail on errors", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ detail: "domain not fine-tuned" }, 409));
    const client = new ServiceClient("", fetchMock);
    await expect(client.postGenerate({
      target_keyword: "x",
      domain_id: "agriculture",
      n_samples: 1,
      seed: 0,
    })).rejects.toMatchObject({ status: 409, detail: "domain not fine-tuned" });
  });

  it("wraps non-JSON errors with the status text", async () => {
    const fetchMock = vi.fn(async () => new Response("boom", { status: 500, statusText: "Internal" }));
    const client = new ServiceClient("", fetchMock);
    const error = await client.getJob("j").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(500);
  });
});

describe("pollJob", () => {
  function clientWith(statuses: JobStatus[]): ServiceClient {
    let call = 0;
    const fetchMock = vi.fn(async () => jsonResponse(statuses[Math.min(call++, statuses.length - 1)]));
    return new ServiceClient("", fetchMock);
  }

  it("polls until done, never faster than once per second", async () => {
    const sleeps: number[] = [];
    const statuses: JobStatus[] = [
      { status: "queued", progress: 0, error: null },
      { status: "running", progress: 0.5, error: null },
      doneStatus(),
    ];
    const seen: number[] = [];
    const result = await pollJob(clientWith(statuses), "j1", {
      intervalMs: 10, // below the floor; must be clamped up
      sleep: async (ms) => {
        sleeps.push(ms);
      },
      onStatus: (status) => seen.push(status.progress),
    });
    expect(result.status).toBe("done");
    expect(seen).toEqual([0, 0.5, 1]);
    expect(sleeps).toHaveLength(2);
    expect(sleeps.every((ms) => ms >= MIN_POLL_INTERVAL_MS)).toBe(true);
  });

  it("rejects with the server message when the job fails", async () => {
    const statuses: JobStatus[] = [
      { status: "running", progress: 0.3, error: null },
      { status: "failed", progress: 0.3, error: "backend exploded" },
    ];
    await expect(
      pollJob(clientWith(statuses), "j2", { sleep: async () => {} }),
    ).rejects.toThrow("backend exploded");
  });
});

describe("job ideas payload", () => {
  it("fetches the scored idea list for a done job", async () => {
    const fetchMock = vi.fn(async (url: string) => {
      expect(url).toBe("/jobs/j9/ideas");
      return jsonResponse(IDEAS);
    });
    const client = new ServiceClient("", fetchMock);
    const ideas = await client.getJobIdeas("j9");
    expect(ideas).toHaveLength(IDEAS.length);
    expect(ideas[4]!.min_score).toBeNull();
  });
});
