/** Thin typed client over the review service. Every mutation round-trips
 * through the server before the UI shows anything (no optimistic state). */

import type {
  DecisionResponse,
  FciExamples,
  FciPage,
  FciPayload,
  RuleList,
  SolveResult,
  WorkspaceSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

/** The service is unreachable (network refused, not an HTTP status). */
export class Unreachable extends Error {}

export interface RuleEdits {
  "pb-conditions"?: string[];
  "sol-keep"?: string[];
  "sol-remove"?: string[];
  "sol-add"?: string[];
  explanation?: string;
}

export interface DecisionBody {
  action: "accept" | "reject" | "edit" | "reopen";
  etag: string;
  explanation?: string;
  edits?: RuleEdits;
  actor?: string;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new Unreachable(String(err));
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof body?.detail === "string" ? body.detail : response.statusText;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class Api {
  constructor(readonly base: string = "") {}

  workspace(): Promise<WorkspaceSummary> {
    return request(`${this.base}/api/workspace`);
  }

  fcis(params: { minSupport?: string; page?: number; pageSize?: number } = {}): Promise<FciPage> {
    const query = new URLSearchParams();
    if (params.minSupport) query.set("min-support", params.minSupport);
    if (params.page) query.set("page", String(params.page));
    if (params.pageSize) query.set("page-size", String(params.pageSize));
    const suffix = query.toString() ? `?${query}` : "";
    return request(`${this.base}/api/fcis${suffix}`);
  }

  fci(id: number): Promise<FciPayload> {
    return request(`${this.base}/api/fcis/${id}`);
  }

  examples(id: number): Promise<FciExamples> {
    return request(`${this.base}/api/fcis/${id}/examples`);
  }

  rules(): Promise<RuleList> {
    return request(`${this.base}/api/rules`);
  }

  decide(ruleId: number, body: DecisionBody): Promise<DecisionResponse> {
    return request(`${this.base}/api/rules/${ruleId}/decision`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  solve(problem: string[], k?: number): Promise<SolveResult> {
    return request(`${this.base}/api/solve`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(k === undefined ? { problem } : { problem, k }),
    });
  }
}
