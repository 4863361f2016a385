// Typed client for the ontopop service. Every call goes through `http` so
// tests can intercept the transport; the UI never validates terms itself.

export type CellStatus =
  | { kind: "Resolved"; iri: string }
  | { kind: "OutOfRange"; iri: string }
  | { kind: "Unknown"; text: string }
  | { kind: "Ambiguous"; candidates: string[] }
  | { kind: "Empty" };

export interface RangeSpec {
  kind: string;
  ontologyId?: string;
  root?: string;
  followProperties?: string[];
  includeRoot?: boolean;
}

export interface ColumnSpec {
  name: string;
  range: RangeSpec;
  multiValued?: boolean;
  delimiter?: string;
  mintUnknown?: boolean;
  relationshipNote?: string;
}

export interface Descriptor {
  version: string;
  prefixes: Record<string, string>;
  ontologySources: { id: string; origin: string; format: string }[];
  columns: ColumnSpec[];
}

export interface TemplateResponse {
  descriptor: Descriptor;
  table: { header: string[]; rows: string[][] };
  statuses: CellStatus[][][];
  summary: Record<string, number>;
}

export interface Candidate {
  iri: string;
  label: string;
}

export interface CellUpdateResponse {
  row: number;
  column: string;
  statuses: CellStatus[];
}

export interface MintedTerm {
  label: string;
  iri: string;
  row: number;
  column: string;
}

export interface ExpandResponse {
  manchester: string;
  functional: string;
  report: string;
  minted: MintedTerm[];
  summary: unknown;
}

export interface ExpandRequest {
  patterns: string[];
  binding: Record<string, string>;
  rows?: number[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public violations: string[] = [],
  ) {
    super(message);
  }
}

export type Http = (input: string, init?: RequestInit) => Promise<Response>;

async function fail(response: Response): Promise<never> {
  let message = `HTTP ${response.status}`;
  let violations: string[] = [];
  try {
    const body = await response.json();
    if (typeof body.error === "string") message = body.error;
    if (Array.isArray(body.violations)) violations = body.violations;
  } catch {
    // non-JSON error body: keep the status text
  }
  throw new ApiError(response.status, message, violations);
}

export class ApiClient {
  constructor(private http: Http = (input, init) => fetch(input, init)) {}

  private async getJson<T>(url: string): Promise<T> {
    const response = await this.http(url);
    if (!response.ok) await fail(response);
    return response.json() as Promise<T>;
  }

  private async postJson<T>(url: string, body: unknown): Promise<T> {
    const response = await this.http(url, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await fail(response);
    return response.json() as Promise<T>;
  }

  template(): Promise<TemplateResponse> {
    return this.getJson("/template");
  }

  async complete(column: string, query: string, limit = 20): Promise<Candidate[]> {
    const params = new URLSearchParams({ column, q: query, limit: String(limit) });
    const body = await this.getJson<{ candidates: Candidate[] }>(`/complete?${params}`);
    return body.candidates;
  }

  setCell(row: number, column: string, text: string): Promise<CellUpdateResponse> {
    return this.postJson("/cells", { row, column, text });
  }

  validate(): Promise<{ summary: Record<string, number>; statuses: CellStatus[][][] }> {
    return this.postJson("/validate", {});
  }

  expand(request: ExpandRequest): Promise<ExpandResponse> {
    return this.postJson("/expand", request);
  }
}
