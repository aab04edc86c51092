export interface MetaResponse {
  experts: string[];
  items: number;
  default_weights: number[];
}

export interface RankingsRow {
  item: string;
  known: Record<string, number | null>;
  extended: Record<string, number>;
}

export interface RankingsResponse {
  items: RankingsRow[];
}

export interface AggregateResponse {
  order: string[];
  raw_scores: Record<string, number>;
  ranks: Record<string, number>;
  rho: number;
}

/** Thin fetch wrapper over the serving API. */
export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  async meta(): Promise<MetaResponse> {
    return this.get<MetaResponse>("/api/meta");
  }

  async rankings(): Promise<RankingsResponse> {
    return this.get<RankingsResponse>("/api/rankings");
  }

  async aggregate(weights: number[]): Promise<AggregateResponse> {
    const response = await fetch(`${this.baseUrl}/api/aggregate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ weights }),
    });
    if (!response.ok) {
      throw new Error(`aggregate failed: ${response.status}`);
    }
    return (await response.json()) as AggregateResponse;
  }

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new Error(`${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }
}

export function validateAggregateResponse(body: unknown): AggregateResponse {
  const candidate = body as AggregateResponse;
  if (
    !candidate ||
    !Array.isArray(candidate.order) ||
    typeof candidate.ranks !== "object" ||
    typeof candidate.raw_scores !== "object" ||
    typeof candidate.rho !== "number"
  ) {
    throw new Error("malformed aggregate response");
  }
  return candidate;
}
