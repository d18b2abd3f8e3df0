/** Payload shapes of the missionvuln HTTP API. */

export type TriageStatus = "candidate" | "relevant" | "irrelevant";
export type TriageDecision = "relevant" | "irrelevant";

export interface ComponentSummary {
  id: string;
  label: string;
  element: "vertex" | "arrow";
  candidates: number;
  relevant: number;
}

export interface DescriptorEntry {
  category: string;
  key: string;
  value: string;
}

export interface DescriptorView {
  namespace: string;
  entries: DescriptorEntry[];
}

export interface CandidateView {
  attack_id: string;
  title: string;
  score: number;
  via: "match" | "class-context";
  status: TriageStatus;
}

export interface EvidenceView {
  component: string;
  label: string;
  descriptors: DescriptorView[];
  candidates: CandidateView[];
}

export interface ChainHop {
  arrow: string;
  source: string;
  target: string;
  attacks: string[];
}

export interface ChainView {
  start: string;
  vertices: string[];
  hops: ChainHop[];
}

export interface LossGroup {
  loss: string;
  priority: number | null;
  description: string;
  traces: string[][];
}

export interface ImpactReport {
  schema: string;
  vulnerable_paths: {
    trivial: string[];
    chains: ChainView[];
    all_lengths: Record<string, number>;
  };
  impact_traces: { start: string; vertices: string[]; loss: string }[];
  losses: LossGroup[];
  totals: { chains: number; traces: number };
}

export interface TriageRequest {
  component: string;
  attack_id: string;
  decision: TriageDecision;
  analyst: string;
  rationale: string;
}
