// Typed client for the /api endpoints. One in-flight request per view is
// enforced by handing each call the view's AbortSignal.

import type { DataType } from "./operators.js";

export interface SchemaField {
  name: string;
  display_name: string;
  type: DataType;
  highlighted: boolean;
  values?: string[];
}

export type WireNode =
  | { and: WireNode[] }
  | { or: WireNode[] }
  | { field: string; op: string; args: (string | number)[] };

export interface SortSpec {
  field: string;
  direction: "asc" | "desc";
}

export interface ResultPage {
  total_matches: number;
  offset: number;
  rows: Record<string, string | number | null>[];
}

export interface SankeyNode {
  name: string;
  total: number;
}

export interface SankeyLink {
  authority: number;
  contractor: number;
  value: number;
  contract_count: number;
  notice_links: string[];
}

export interface SankeyStats {
  n_authorities: number;
  n_contractors: number;
  n_contracts: number;
  total_value_euros: number;
}

export interface SankeyData {
  authorities: SankeyNode[];
  contractors: SankeyNode[];
  links: SankeyLink[];
  stats: SankeyStats;
  rows_with_null_value: number;
  truncated: boolean;
}

export interface CpvEntry {
  code: string;
  description: string;
}

export interface CpvPage {
  total: number;
  offset: number;
  entries: CpvEntry[];
}

export interface Quest {
  cpv_division: string;
  division_label: string;
  country: string;
  year: number;
  title: string;
}

export interface QuestResponse {
  seed: number;
  quest: Quest;
  filter: WireNode;
}

export interface ApiIssue {
  code: string;
  message: string;
  field?: string | null;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public issues: ApiIssue[],
  ) {
    super(issues.map((i) => i.message).join("; ") || `HTTP ${status}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let issues: ApiIssue[] = [];
  try {
    const body = (await response.json()) as { errors?: ApiIssue[] };
    issues = body.errors ?? [];
  } catch {
    issues = [{ code: "http", message: `HTTP ${response.status}` }];
  }
  throw new ApiError(response.status, issues);
}

export class Client {
  constructor(private base: string = "") {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.base + path, { signal });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  async schema(signal?: AbortSignal): Promise<SchemaField[]> {
    const data = await this.getJson<{ fields: SchemaField[] }>("/api/schema", signal);
    return data.fields;
  }

  query(
    filter: WireNode,
    options: { sort?: SortSpec; offset?: number; limit?: number } = {},
    signal?: AbortSignal,
  ): Promise<ResultPage> {
    return this.postJson<ResultPage>("/api/query", { filter, ...options }, signal);
  }

  sankey(
    filter: WireNode,
    maxLinks?: number,
    signal?: AbortSignal,
  ): Promise<SankeyData> {
    const body: Record<string, unknown> = { filter };
    if (maxLinks !== undefined) body.max_links = maxLinks;
    return this.postJson<SankeyData>("/api/sankey", body, signal);
  }

  async exportCsv(filter: WireNode, sort?: SortSpec, signal?: AbortSignal): Promise<Blob> {
    const response = await fetch(this.base + "/api/export", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(sort ? { filter, sort } : { filter }),
      signal,
    });
    if (!response.ok) await parseError(response);
    return response.blob();
  }

  cpv(
    params: { query?: string; digits?: number; offset?: number; limit?: number },
    signal?: AbortSignal,
  ): Promise<CpvPage> {
    const search = new URLSearchParams();
    if (params.query) search.set("query", params.query);
    if (params.digits !== undefined) search.set("digits", String(params.digits));
    if (params.offset !== undefined) search.set("offset", String(params.offset));
    if (params.limit !== undefined) search.set("limit", String(params.limit));
    const suffix = search.toString() ? `?${search}` : "";
    return this.getJson<CpvPage>(`/api/cpv${suffix}`, signal);
  }

  quest(seed: number, minSupport?: number, signal?: AbortSignal): Promise<QuestResponse> {
    const search = new URLSearchParams({ seed: String(seed) });
    if (minSupport !== undefined) search.set("min_support", String(minSupport));
    return this.getJson<QuestResponse>(`/api/quest?${search}`, signal);
  }
}
