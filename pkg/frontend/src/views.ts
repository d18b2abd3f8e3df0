import type {
  CandidateView,
  ChainView,
  ComponentSummary,
  EvidenceView,
  ImpactReport,
  LossGroup,
  TriageDecision,
} from "./types.js";

const ARROW = " → ";

export function chainLabel(chain: ChainView): string {
  return chain.vertices.join(ARROW);
}

export function traceLabel(vertices: string[]): string {
  return vertices.join(ARROW);
}

export function chainAttacks(chain: ChainView): string {
  return chain.hops.map((hop) => hop.attacks.join(", ")).join(" | ");
}

export function cveCandidateCount(candidates: CandidateView[]): number {
  return candidates.filter((c) => c.attack_id.startsWith("CVE-")).length;
}

/** Loss groups ordered by priority rank (1 first); unranked losses last. */
export function sortLossGroups(groups: LossGroup[]): LossGroup[] {
  return [...groups].sort((a, b) => {
    const pa = a.priority ?? Number.MAX_SAFE_INTEGER;
    const pb = b.priority ?? Number.MAX_SAFE_INTEGER;
    return pa !== pb ? pa - pb : a.loss.localeCompare(b.loss);
  });
}

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

export function renderComponentList(
  container: HTMLElement,
  components: ComponentSummary[],
  selectedId: string | null,
  onSelect: (id: string) => void,
): void {
  container.replaceChildren();
  if (components.length === 0) {
    container.appendChild(el("p", "empty-state", "No described elements in this workspace."));
    return;
  }
  const list = el("ul", "component-list");
  for (const component of components) {
    const item = el("li", component.id === selectedId ? "component selected" : "component");
    item.dataset.componentId = component.id;
    const button = el("button", "component-name", component.label);
    button.addEventListener("click", () => onSelect(component.id));
    item.appendChild(button);
    const meta = component.element === "arrow" ? "link, " : "";
    item.appendChild(el("span", "component-meta",
      `${meta}${component.relevant}/${component.candidates} relevant`));
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderEvidence(
  container: HTMLElement,
  view: EvidenceView | null,
  onTriage: (attackId: string, decision: TriageDecision, rationale: string) => void,
): void {
  container.replaceChildren();
  if (view === null) {
    container.appendChild(el("p", "empty-state", "Select an element to review its evidence."));
    return;
  }
  container.appendChild(el("h2", "panel-title", view.label));

  const descriptors = el("dl", "descriptors");
  for (const dset of view.descriptors) {
    for (const entry of dset.entries) {
      descriptors.appendChild(el("dt", undefined, `${entry.category} / ${entry.key}`));
      descriptors.appendChild(el("dd", undefined, entry.value));
    }
  }
  container.appendChild(descriptors);

  if (view.candidates.length === 0) {
    container.appendChild(el("p", "empty-state", "No candidate attack vectors matched."));
    return;
  }

  const rationale = el("input", "rationale") as HTMLInputElement;
  rationale.placeholder = "rationale for the next decision";
  rationale.id = "rationale";

  const table = el("table", "candidates");
  const head = el("tr");
  for (const column of ["attack", "title", "score", "via", "status", ""]) {
    head.appendChild(el("th", undefined, column));
  }
  table.appendChild(head);
  for (const candidate of view.candidates) {
    const row = el("tr", `candidate status-${candidate.status}`);
    row.dataset.attackId = candidate.attack_id;
    row.appendChild(el("td", "attack-id", candidate.attack_id));
    row.appendChild(el("td", undefined, candidate.title));
    row.appendChild(el("td", undefined, candidate.score.toFixed(3)));
    row.appendChild(el("td", undefined, candidate.via));
    row.appendChild(el("td", "status", candidate.status));
    const actions = el("td", "actions");
    for (const decision of ["relevant", "irrelevant"] as TriageDecision[]) {
      const button = el("button", `mark-${decision}`, decision);
      button.addEventListener("click", () =>
        onTriage(candidate.attack_id, decision, rationale.value));
      actions.appendChild(button);
    }
    row.appendChild(actions);
    table.appendChild(row);
  }
  container.appendChild(table);
  container.appendChild(rationale);
}

export function renderImpact(container: HTMLElement, report: ImpactReport | null): void {
  container.replaceChildren();
  container.appendChild(el("h2", "panel-title", "Mission impact"));
  if (report === null) {
    container.appendChild(el("p", "empty-state", "No analysis loaded."));
    return;
  }

  const chains = el("div", "chains");
  chains.appendChild(el("h3", undefined,
    `Attack chains (${report.vulnerable_paths.chains.length})`));
  if (report.vulnerable_paths.chains.length === 0) {
    chains.appendChild(el("p", "empty-state", "No attack chain is attested."));
  } else {
    const list = el("ul", "chain-list");
    for (const chain of report.vulnerable_paths.chains) {
      const item = el("li", "chain");
      item.appendChild(el("span", "chain-label", chainLabel(chain)));
      item.appendChild(el("span", "chain-attacks", chainAttacks(chain)));
      list.appendChild(item);
    }
    chains.appendChild(list);
  }
  container.appendChild(chains);

  const traces = el("div", "traces");
  traces.appendChild(el("h3", undefined, `Impact traces (${report.totals.traces})`));
  for (const group of sortLossGroups(report.losses)) {
    const section = el("div", "loss-group");
    const rank = group.priority === null ? "unranked" : `priority ${group.priority}`;
    section.appendChild(el("h4", undefined, `${group.loss} (${rank})`));
    section.appendChild(el("p", "loss-description", group.description));
    const list = el("ul", "trace-list");
    for (const vertices of group.traces) {
      list.appendChild(el("li", "trace", traceLabel(vertices)));
    }
    section.appendChild(list);
    traces.appendChild(section);
  }
  container.appendChild(traces);
}

export function renderError(container: HTMLElement, message: string | null,
                            onRetry?: () => void): void {
  container.replaceChildren();
  if (message === null) return;
  const banner = el("div", "error-banner");
  banner.appendChild(el("span", undefined, message));
  if (onRetry) {
    const retry = el("button", "retry", "retry");
    retry.addEventListener("click", onRetry);
    banner.appendChild(retry);
  }
  container.appendChild(banner);
}
