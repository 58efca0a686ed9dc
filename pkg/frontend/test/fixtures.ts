/** Mocked service payloads shared by the contract tests. */

import type { DomainEntry, IdeaEntry, JobStatus } from "../src/types";

/** Six ranked source domains, the first three near-field. */
export const SIX_DOMAINS: DomainEntry[] = [
  { domain_id: "weapons", display_name: "Weapons", rank: 1, proximity: 0.92, has_checkpoint: true },
  { domain_id: "agriculture", display_name: "Agriculture", rank: 2, proximity: 0.81, has_checkpoint: true },
  { domain_id: "lighting", display_name: "Lighting", rank: 3, proximity: 0.64, has_checkpoint: true },
  { domain_id: "drilling_mining", display_name: "Drilling & Mining", rank: 4, proximity: 0.31, has_checkpoint: true },
  { domain_id: "grinding_polishing", display_name: "Grinding & Polishing", rank: 5, proximity: 0.22, has_checkpoint: false },
  { domain_id: "fuels_lubricants", display_name: "Fuels & Lubricants", rank: 6, proximity: 0.09, has_checkpoint: true },
];

/** Eight ideas: five unique, one unscorable, deliberately unsorted scores. */
export const IDEAS: IdeaEntry[] = [
  { text: "Rolling toy wheeled target", is_unique: true, min_score: 0.41, argmin_pair: ["target", "toy"], token_count: 4 },
  { text: "Rolling toy projectile launcher", is_unique: true, min_score: 0.12, argmin_pair: ["launcher", "toy"], token_count: 4 },
  { text: "rolling toy wheeled target", is_unique: false, min_score: 0.41, argmin_pair: ["target", "toy"], token_count: 4 },
  { text: "Rolling toy dart board capable of turns", is_unique: true, min_score: 0.05, argmin_pair: ["dart board", "turn"], token_count: 7 },
  { text: "Mysterious widget", is_unique: true, min_score: null, argmin_pair: null, token_count: 2 },
  { text: "Rolling toy air gun", is_unique: true, min_score: 0.3, argmin_pair: ["gun", "toy"], token_count: 4 },
  { text: "Rolling toy projectile launcher", is_unique: false, min_score: 0.12, argmin_pair: ["launcher", "toy"], token_count: 4 },
  { text: "rolling toy air gun", is_unique: false, min_score: 0.3, argmin_pair: ["gun", "toy"], token_count: 4 },
];

export const UNIQUE_COUNT = IDEAS.filter((idea) => idea.is_unique).length;

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function doneStatus(progress = 1): JobStatus {
  return { status: "done", progress, error: null };
}
