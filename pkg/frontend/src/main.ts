/** Wires the workbench panels to the service client. */

import { ApiError, ServiceClient } from "./api";
import { pollJob } from "./poll";
import { Workbench } from "./state";
import {
  DEFAULT_N_SAMPLES,
  DEFAULT_TEMPERATURE,
  DEFAULT_TOP_K,
  type DomainEntry,
  type IdeaSortKey,
} from "./types";
import {
  downloadText,
  renderDomainList,
  renderError,
  renderIdeaTable,
  renderProgress,
} from "./views";

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function input(id: string): HTMLInputElement {
  return byId(id) as HTMLInputElement;
}

export function start(): void {
  const client = new ServiceClient(
    (window as { IDEATION_BASE_URL?: string }).IDEATION_BASE_URL ?? "",
  );
  const workbench = new Workbench(window.localStorage);

  input("temperature").value = String(DEFAULT_TEMPERATURE);
  input("top-k").value = String(DEFAULT_TOP_K);
  input("n-samples").value = String(DEFAULT_N_SAMPLES);

  const refreshTable = () => {
    renderIdeaTable(byId("ideas"), workbench.visibleRows(), workbench, (index) => {
      workbench.toggleShortlist(index);
      refreshTable();
    });
    byId("shortlist-count").textContent = String(workbench.shortlist().length);
  };

  const loadDomains = async () => {
    workbench.targetKeyword = input("keyword").value.trim();
    if (!workbench.targetKeyword) return;
    try {
      const entries = await client.getDomains(workbench.targetKeyword);
      workbench.setDomains(entries);
      renderDomainList(byId("domains"), entries, (domain) => launch(domain));
    } catch (error) {
      renderError(byId("domains"), describe(error), loadDomains);
    }
  };

  const launch = async (domain: DomainEntry) => {
    workbench.selectDomain(domain.domain_id);
    try {
      const accepted = await client.postGenerate({
        target_keyword: workbench.targetKeyword,
        domain_id: domain.domain_id,
        n_samples: Number(input("n-samples").value) || DEFAULT_N_SAMPLES,
        seed: Number(input("seed").value) || 0,
        temperature: Number(input("temperature").value) || DEFAULT_TEMPERATURE,
        top_k: Number(input("top-k").value) || DEFAULT_TOP_K,
      });
      workbench.startJob(accepted.job_id);
      renderProgress(byId("progress"), 0, "queued");
      await pollJob(client, accepted.job_id, {
        onStatus: (status) => {
          const shown = workbench.updateJobStatus(status);
          renderProgress(byId("progress"), shown, status.status);
        },
      });
      workbench.setIdeas(await client.getJobIdeas(accepted.job_id));
      refreshTable();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        renderError(byId("progress"), "domain not fine-tuned", () => launch(domain));
      } else {
        renderError(byId("progress"), describe(error), () => launch(domain));
      }
    }
  };

  byId("load-domains").addEventListener("click", loadDomains);
  (byId("sort-key") as HTMLSelectElement).addEventListener("change", (event) => {
    workbench.sortKey = (event.target as HTMLSelectElement).value as IdeaSortKey;
    refreshTable();
  });
  input("unique-only").addEventListener("change", (event) => {
    workbench.uniqueOnly = (event.target as HTMLInputElement).checked;
    refreshTable();
  });
  byId("export-shortlist").addEventListener("click", () => {
    downloadText("shortlist.txt", workbench.exportShortlist());
  });
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  start();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
