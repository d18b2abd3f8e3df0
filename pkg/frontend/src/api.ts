import type {
  ComponentSummary,
  EvidenceView,
  ImpactReport,
  TriageRequest,
} from "./types.js";

/** Error payload the service returns for every failed request. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = await response.json();
    return new ApiError(response.status, body.code ?? "bad-request",
      body.message ?? response.statusText);
  } catch {
    return new ApiError(response.status, "bad-request", response.statusText);
  }
}

/** Thin typed client over the service API; no state, no caching. */
export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  components(): Promise<ComponentSummary[]> {
    return this.get<ComponentSummary[]>("/api/components");
  }

  evidence(componentId: string): Promise<EvidenceView> {
    return this.get<EvidenceView>(`/api/evidence/${encodeURIComponent(componentId)}`);
  }

  impact(): Promise<ImpactReport> {
    return this.get<ImpactReport>("/api/impact");
  }

  async triage(request: TriageRequest): Promise<void> {
    const response = await fetch(this.baseUrl + "/api/triage", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw await parseError(response);
  }
}
