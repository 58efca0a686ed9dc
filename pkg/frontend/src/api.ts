/** Thin fetch client for the generation service. */

import type { DomainEntry, GenerateRequest, IdeaEntry, JobAccepted, JobStatus } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && body.detail !== undefined) {
          detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getDomains(target: string): Promise<DomainEntry[]> {
    return this.request<DomainEntry[]>(`/domains?target=${encodeURIComponent(target)}`);
  }

  postGenerate(body: GenerateRequest): Promise<JobAccepted> {
    return this.request<JobAccepted>("/generate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getJob(jobId: string): Promise<JobStatus> {
    return this.request<JobStatus>(`/jobs/${encodeURIComponent(jobId)}`);
  }

  getJobIdeas(jobId: string): Promise<IdeaEntry[]> {
    return this.request<IdeaEntry[]>(`/jobs/${encodeURIComponent(jobId)}/ideas`);
  }
}
