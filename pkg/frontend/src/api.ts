/** Typed client for the attainrec HTTP API. */

export interface QueryResponse {
  columns: string[];
  rows: (string | number | null)[][];
  elapsed_ms: number;
  total_rows: number;
  query?: string;
}

export interface QueryError {
  line: number;
  column: number;
  message: string;
}

export interface HistogramSpec {
  group: string;
  edges: number[];
  densities: number[];
  count: number;
}

export interface SchemaVertex {
  kind: string;
  count: number;
  attributes: string[];
}

export interface SchemaEdge extends SchemaVertex {
  endpoints: [string, string];
}

export interface Schema {
  vertices: SchemaVertex[];
  edges: SchemaEdge[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: QueryError | { message: string },
  ) {
    super(detail.message);
  }
}

type Fetch = typeof fetch;

export class ApiClient {
  constructor(
    public baseUrl: string,
    private fetchImpl: Fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body);
    }
    return body as T;
  }

  runQuery(text: string): Promise<QueryResponse> {
    return this.request<QueryResponse>("/api/query", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  recommendationsPath(
    steamid: string,
    opts: { excludeOwned?: boolean; genre?: string; n?: number } = {},
  ): string {
    const params = new URLSearchParams();
    if (opts.excludeOwned) params.set("exclude_owned", "1");
    if (opts.genre) params.set("genre", opts.genre);
    if (opts.n !== undefined) params.set("n", String(opts.n));
    const suffix = params.toString();
    return (
      `/api/players/${encodeURIComponent(steamid)}/recommendations` +
      (suffix ? `?${suffix}` : "")
    );
  }

  recommendations(
    steamid: string,
    opts: { excludeOwned?: boolean; genre?: string; n?: number } = {},
  ): Promise<QueryResponse> {
    return this.request<QueryResponse>(this.recommendationsPath(steamid, opts));
  }

  attainmentHistograms(bins = 50, byGenre = true): Promise<HistogramSpec[]> {
    const params = new URLSearchParams({ bins: String(bins) });
    if (byGenre) params.set("groupby", "genre");
    return this.request<HistogramSpec[]>(`/api/stats/attainment?${params}`);
  }

  schema(): Promise<Schema> {
    return this.request<Schema>("/api/schema");
  }
}
