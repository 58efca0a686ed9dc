/** DOM rendering: one function per panel, data in payload order. */

import { groupDomains, type IdeaRow, type Workbench } from "./state";
import type { DomainEntry } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderDomainList(
  container: HTMLElement,
  entries: DomainEntry[],
  onSelect: (domain: DomainEntry) => void,
): void {
  container.replaceChildren();
  if (entries.length === 0) {
    container.append(el("p", "empty-state", "No source domains ranked for this keyword."));
    return;
  }
  const groups = groupDomains(entries);
  const sections: Array<[string, DomainEntry[]]> = [
    ["near-field", groups.nearField],
    ["far-field", groups.farField],
  ];
  for (const [label, members] of sections) {
    if (members.length === 0) continue;
    const section = el("section", `domain-group ${label}`);
    section.append(el("h3", "group-label", label));
    const list = el("ul", "domain-list");
    for (const entry of members) {
      const item = el("li", "domain-row");
      item.append(el("span", "rank-badge", `#${entry.rank}`));
      item.append(el("span", "domain-name", entry.display_name));
      item.append(el("span", "proximity", entry.proximity.toFixed(4)));
      const button = el("button", "select-domain");
      button.textContent = entry.has_checkpoint ? "generate" : "not fine-tuned";
      button.disabled = !entry.has_checkpoint;
      button.addEventListener("click", () => onSelect(entry));
      item.append(button);
      list.append(item);
    }
    section.append(list);
    container.append(section);
  }
}

export function renderProgress(container: HTMLElement, progress: number, statusText: string): void {
  container.replaceChildren();
  const bar = el("div", "progress-bar");
  bar.style.width = `${Math.round(progress * 100)}%`;
  container.append(bar, el("span", "progress-label", `${statusText} ${Math.round(progress * 100)}%`));
}

export function renderIdeaTable(
  container: HTMLElement,
  rows: IdeaRow[],
  workbench: Workbench,
  onToggleShortlist: (index: number) => void,
): void {
  container.replaceChildren();
  const table = el("table", "idea-table");
  const head = el("tr");
  for (const column of ["star", "idea", "unique", "min relevancy", "closest-apart pair", "tokens"]) {
    head.append(el("th", undefined, column));
  }
  table.append(head);
  const shortlisted = new Set(workbench.shortlist().map((row) => row.index));
  for (const row of rows) {
    const tr = el("tr", row.idea.is_unique ? "unique" : "duplicate");
    const star = el("td", "star-cell");
    const starButton = el("button", "star", shortlisted.has(row.index) ? "★" : "☆");
    starButton.addEventListener("click", () => onToggleShortlist(row.index));
    star.append(starButton);
    tr.append(star);
    tr.append(el("td", "idea-text", row.idea.text || "(empty)"));
    tr.append(el("td", "unique-flag", row.idea.is_unique ? "yes" : "dup"));
    if (row.idea.min_score === null) {
      const cell = el("td", "min-score");
      cell.append(el("span", "unscorable-badge", "unscorable"));
      tr.append(cell);
      tr.append(el("td", "argmin", "-"));
    } else {
      tr.append(el("td", "min-score", row.idea.min_score.toFixed(4)));
      tr.append(el("td", "argmin", row.idea.argmin_pair ? row.idea.argmin_pair.join(" / ") : "-"));
    }
    tr.append(el("td", "tokens", String(row.idea.token_count)));
    table.append(tr);
  }
  container.append(table);
}

export function renderError(container: HTMLElement, message: string, onRetry: () => void): void {
  container.replaceChildren();
  const banner = el("div", "error-banner");
  banner.append(el("span", undefined, message));
  const retry = el("button", "retry", "retry");
  retry.addEventListener("click", onRetry);
  banner.append(retry);
  container.append(banner);
}

export function downloadText(filename: string, content: string): void {
  const blob = new Blob([content], { type: "text/plain;charset=utf-8" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}
