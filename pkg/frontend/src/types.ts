/** DTOs mirroring the generation service's JSON payloads. */

export interface DomainEntry {
  domain_id: string;
  display_name: string;
  rank: number;
  proximity: number;
  has_checkpoint: boolean;
}

export interface GenerateRequest {
  target_keyword: string;
  domain_id: string;
  n_samples: number;
  seed: number;
  temperature?: number;
  top_k?: number;
}

export interface JobAccepted {
  job_id: string;
}

export type JobStateName = "queued" | "running" | "done" | "failed";

export interface JobStatus {
  status: JobStateName;
  progress: number;
  error: string | null;
}

export interface IdeaEntry {
  text: string;
  is_unique: boolean;
  min_score: number | null;
  argmin_pair: [string, string] | null;
  token_count: number;
}

export type IdeaSortKey = "novelty" | "order" | "tokens";

/** Generation defaults shown in the launch panel. */
export const DEFAULT_TEMPERATURE = 0.9;
export const DEFAULT_TOP_K = 50;
export const DEFAULT_N_SAMPLES = 500;
