import { ApiClient, ApiError } from "./api.js";
import type {
  ComponentSummary,
  EvidenceView,
  ImpactReport,
  TriageDecision,
} from "./types.js";
import {
  renderComponentList,
  renderError,
  renderEvidence,
  renderImpact,
} from "./views.js";

/** The triage loop: pick an element, mark candidates, watch the impact view.
 *
 * Every displayed status comes from a server response; the app never mutates
 * its state locally. After an acknowledged decision both the evidence and
 * the impact views are refetched, so the analyst sees the effect of the
 * decision in the same session.
 */
export class TriageApp {
  private components: ComponentSummary[] = [];
  private evidence: EvidenceView | null = null;
  private impact: ImpactReport | null = null;
  private selectedId: string | null = null;

  private readonly componentsPane: HTMLElement;
  private readonly evidencePane: HTMLElement;
  private readonly impactPane: HTMLElement;
  private readonly errorPane: HTMLElement;

  private inflight: Promise<void> = Promise.resolve();

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
    private readonly analyst: string = "analyst",
  ) {
    root.replaceChildren();
    this.errorPane = this.pane(root, "error", "div");
    const layout = document.createElement("div");
    layout.className = "layout";
    root.appendChild(layout);
    this.componentsPane = this.pane(layout, "components", "aside");
    const main = document.createElement("main");
    layout.appendChild(main);
    this.evidencePane = this.pane(main, "evidence", "section");
    this.impactPane = this.pane(main, "impact", "section");
  }

  private pane(parent: HTMLElement, id: string, tag: string): HTMLElement {
    const node = document.createElement(tag);
    node.id = id;
    parent.appendChild(node);
    return node;
  }

  /** Resolves when no request is in flight; test hook and render barrier. */
  idle(): Promise<void> {
    return this.inflight;
  }

  private track(work: Promise<void>): Promise<void> {
    this.inflight = this.inflight.then(() => work, () => work);
    return work;
  }

  loadWorkspace(): Promise<void> {
    return this.track(this.doLoadWorkspace());
  }

  private async doLoadWorkspace(): Promise<void> {
    try {
      this.components = await this.api.components();
      this.impact = await this.api.impact();
      renderError(this.errorPane, null);
    } catch (error) {
      this.showError(error, () => void this.loadWorkspace());
      return;
    }
    this.renderAll();
  }

  select(componentId: string): Promise<void> {
    return this.track(this.doSelect(componentId));
  }

  private async doSelect(componentId: string): Promise<void> {
    try {
      this.evidence = await this.api.evidence(componentId);
      this.selectedId = componentId;
      renderError(this.errorPane, null);
    } catch (error) {
      this.showError(error);
      return;
    }
    this.renderAll();
  }

  submitTriage(attackId: string, decision: TriageDecision,
               rationale: string): Promise<void> {
    return this.track(this.doSubmitTriage(attackId, decision, rationale));
  }

  private async doSubmitTriage(attackId: string, decision: TriageDecision,
                               rationale: string): Promise<void> {
    if (this.selectedId === null) return;
    try {
      await this.api.triage({
        component: this.selectedId,
        attack_id: attackId,
        decision,
        analyst: this.analyst,
        rationale,
      });
      // acknowledged; now refetch everything the decision can influence
      this.evidence = await this.api.evidence(this.selectedId);
      this.impact = await this.api.impact();
      this.components = await this.api.components();
      renderError(this.errorPane, null);
    } catch (error) {
      if (error instanceof ApiError && error.code === "unknown-candidate") {
        this.showError(new Error(`candidate unknown: ${attackId}`));
      } else {
        this.showError(error);
      }
      return;
    }
    this.renderAll();
  }

  private showError(error: unknown, onRetry?: () => void): void {
    const message = error instanceof Error ? error.message : String(error);
    renderError(this.errorPane, message, onRetry);
  }

  private renderAll(): void {
    renderComponentList(this.componentsPane, this.components, this.selectedId,
      (id) => void this.select(id));
    renderEvidence(this.evidencePane, this.evidence,
      (attackId, decision, rationale) =>
        void this.submitTriage(attackId, decision, rationale));
    renderImpact(this.impactPane, this.impact);
  }
}
