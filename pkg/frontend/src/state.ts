/**
 * Workbench view-model: pure transforms over service payloads.
 *
 * The UI computes no scores of its own. Sorting and filtering are view
 * transforms over the fetched idea list; clearing them restores exactly
 * what the service sent. The shortlist lives client-side only.
 */

import type { DomainEntry, IdeaEntry, IdeaSortKey, JobStatus } from "./types";

/** An idea row paired with its stable generation index. */
export interface IdeaRow {
  index: number;
  idea: IdeaEntry;
}

export interface DomainGroups {
  nearField: DomainEntry[];
  farField: DomainEntry[];
}

/**
 * Split the ranked payload into near/far groups for display badges.
 * Payload order is preserved; the top half (rounded up) counts as near-field.
 */
export function groupDomains(entries: DomainEntry[]): DomainGroups {
  const cut = Math.ceil(entries.length / 2);
  return { nearField: entries.slice(0, cut), farField: entries.slice(cut) };
}

export function toRows(ideas: IdeaEntry[]): IdeaRow[] {
  return ideas.map((idea, index) => ({ index, idea }));
}

/** Stable sort; "novelty" is ascending min_score with unscorable rows last. */
export function sortRows(rows: IdeaRow[], key: IdeaSortKey): IdeaRow[] {
  const copy = [...rows];
  if (key === "order") {
    copy.sort((a, b) => a.index - b.index);
  } else if (key === "tokens") {
    copy.sort((a, b) => a.idea.token_count - b.idea.token_count || a.index - b.index);
  } else {
    copy.sort((a, b) => {
      const scoreA = a.idea.min_score;
      const scoreB = b.idea.min_score;
      if (scoreA === null && scoreB === null) return a.index - b.index;
      if (scoreA === null) return 1;
      if (scoreB === null) return -1;
      return scoreA - scoreB || a.index - b.index;
    });
  }
  return copy;
}

export function filterUnique(rows: IdeaRow[], uniqueOnly: boolean): IdeaRow[] {
  return uniqueOnly ? rows.filter((row) => row.idea.is_unique) : rows;
}

/** Minimal slice of window.localStorage so tests can inject a map. */
export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export class MemoryStore implements KeyValueStore {
  private readonly data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

const SHORTLIST_KEY = "ideation.shortlist";

export class Workbench {
  targetKeyword = "";
  selectedDomain: DomainEntry | null = null;
  domains: DomainEntry[] = [];
  jobId: string | null = null;
  jobStatus: JobStatus | null = null;
  sortKey: IdeaSortKey = "novelty";
  uniqueOnly = true;

  private fetched: IdeaRow[] = [];
  private shortlisted = new Set<number>();
  private displayedProgress = 0;

  constructor(private readonly store: KeyValueStore = new MemoryStore()) {
    const saved = this.store.getItem(SHORTLIST_KEY);
    if (saved) {
      try {
        this.shortlisted = new Set(JSON.parse(saved) as number[]);
      } catch {
        this.shortlisted = new Set();
      }
    }
  }

  setDomains(entries: DomainEntry[]): void {
    this.domains = entries;
    if (this.selectedDomain && !entries.some((e) => e.domain_id === this.selectedDomain!.domain_id)) {
      this.selectedDomain = null;
    }
  }

  selectDomain(domainId: string): DomainEntry | null {
    this.selectedDomain = this.domains.find((e) => e.domain_id === domainId) ?? null;
    return this.selectedDomain;
  }

  /** Progress shown to the user never decreases while a job is polled. */
  updateJobStatus(status: JobStatus): number {
    this.jobStatus = status;
    this.displayedProgress = Math.max(this.displayedProgress, status.progress);
    return this.displayedProgress;
  }

  startJob(jobId: string): void {
    this.jobId = jobId;
    this.jobStatus = { status: "queued", progress: 0, error: null };
    this.displayedProgress = 0;
    this.fetched = [];
  }

  setIdeas(ideas: IdeaEntry[]): void {
    this.fetched = toRows(ideas);
    // shortlist must stay a subset of what is on screen
    for (const index of [...this.shortlisted]) {
      if (index >= ideas.length) this.shortlisted.delete(index);
    }
    this.persistShortlist();
  }

  /** The fetched list untouched by any view transform. */
  fetchedRows(): IdeaRow[] {
    return [...this.fetched];
  }

  visibleRows(): IdeaRow[] {
    return sortRows(filterUnique(this.fetched, this.uniqueOnly), this.sortKey);
  }

  clearViewTransforms(): void {
    this.sortKey = "order";
    this.uniqueOnly = false;
  }

  toggleShortlist(index: number): boolean {
    if (!this.fetched.some((row) => row.index === index)) {
      return false;
    }
    if (this.shortlisted.has(index)) {
      this.shortlisted.delete(index);
    } else {
      this.shortlisted.add(index);
    }
    this.persistShortlist();
    return this.shortlisted.has(index);
  }

  shortlist(): IdeaRow[] {
    return this.fetched.filter((row) => this.shortlisted.has(row.index));
  }

  /** Plain-text export of shortlisted ideas, one per line. */
  exportShortlist(): string {
    return this.shortlist()
      .map((row) => row.idea.text)
      .join("\n");
  }

  private persistShortlist(): void {
    this.store.setItem(SHORTLIST_KEY, JSON.stringify([...this.shortlisted].sort((a, b) => a - b)));
  }
}
