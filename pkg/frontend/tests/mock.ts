/** An in-memory stand-in for the review service, faithful to the real
 * API's shapes: its payload bodies are captured from the live service
 * (see scripts/capture-fixtures.py) and its decision semantics mirror the
 * server's transition, explanation, and etag rules. */

import type { RulePayload } from "../src/types.js";
import fixtures from "./fixtures.json";

const ACTIONS: Record<string, string> = {
  accept: "accepted",
  accepted: "accepted",
  reject: "rejected",
  rejected: "rejected",
  edit: "edited",
  edited: "edited",
  reopen: "reopened",
  reopened: "reopened",
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function supportValue(fraction: string): number {
  const [num, den] = fraction.split("/").map(Number);
  return den ? (num ?? 0) / den : 0;
}

export class MockService {
  rules = new Map<number, RulePayload>();
  sequence = 0;
  down = false;
  received: Array<{ path: string; body: Record<string, unknown> }> = [];

  constructor() {
    for (const rule of fixtures.rules.rules as RulePayload[]) {
      this.rules.set(rule.id, structuredClone(rule));
    }
  }

  etag(): string {
    return `etag-${this.sequence}`;
  }

  private patternAccepted(): boolean {
    return this.rules.get(fixtures.pattern_rule_id)?.status === "accepted";
  }

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    if (this.down) {
      throw new TypeError("fetch failed");
    }
    const url = String(input);
    const [path, query = ""] = url.split("?");
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    if (method === "POST") {
      this.received.push({ path: path ?? "", body });
    }

    if (method === "GET" && path === "/api/workspace") {
      return jsonResponse({ ...fixtures.workspace, etag: this.etag() });
    }
    if (method === "GET" && path === "/api/fcis") {
      const params = new URLSearchParams(query);
      const minSupport = params.get("min-support");
      let fcis = fixtures.fcis.fcis;
      if (minSupport !== null) {
        if (Number.isNaN(Number(minSupport))) {
          return jsonResponse({ detail: `not a support threshold: ${minSupport}` }, 400);
        }
        fcis = fcis.filter((f) => supportValue(f.support) >= Number(minSupport));
      }
      return jsonResponse({
        ...fixtures.fcis,
        fcis,
        total: fcis.length,
        etag: this.etag(),
      });
    }
    const detailMatch = path?.match(/^\/api\/fcis\/(\d+)$/);
    if (method === "GET" && detailMatch) {
      const payload = (fixtures.fci_details as Record<string, unknown>)[detailMatch[1] ?? ""];
      return payload
        ? jsonResponse(payload)
        : jsonResponse({ detail: `no itemset with id ${detailMatch[1]}` }, 404);
    }
    const examplesMatch = path?.match(/^\/api\/fcis\/(\d+)\/examples$/);
    if (method === "GET" && examplesMatch) {
      const payload = (fixtures.fci_examples as Record<string, unknown>)[examplesMatch[1] ?? ""];
      return payload
        ? jsonResponse(payload)
        : jsonResponse({ detail: `no itemset with id ${examplesMatch[1]}` }, 404);
    }
    if (method === "GET" && path === "/api/rules") {
      return jsonResponse({
        rules: [...this.rules.values()].sort((a, b) => a.id - b.id),
        etag: this.etag(),
      });
    }
    const decisionMatch = path?.match(/^\/api\/rules\/(\d+)\/decision$/);
    if (method === "POST" && decisionMatch) {
      return this.decide(Number(decisionMatch[1]), body);
    }
    if (method === "POST" && path === "/api/solve") {
      return this.solve(body);
    }
    return jsonResponse({ detail: `mock: unhandled ${method} ${url}` }, 500);
  };

  private decide(ruleId: number, body: Record<string, unknown>): Response {
    const action = ACTIONS[String(body.action)];
    if (action === undefined) {
      return jsonResponse({ detail: `unknown action ${String(body.action)}` }, 422);
    }
    const edits = body.edits as Record<string, unknown> | undefined;
    if (edits !== undefined && action !== "edited" && action !== "accepted") {
      return jsonResponse({ detail: `edits do not apply to action ${action}` }, 422);
    }
    const rule = this.rules.get(ruleId);
    if (rule === undefined) {
      return jsonResponse({ detail: `no rule with id ${ruleId}` }, 404);
    }
    if (body.etag !== this.etag()) {
      return jsonResponse({ detail: "stale etag: the workspace changed, reload" }, 409);
    }

    const legal =
      rule.status === "candidate"
        ? ["edited", "accepted", "rejected"]
        : ["reopened"];
    if (!legal.includes(action)) {
      return jsonResponse(
        { detail: `rule ${ruleId} is ${rule.status}; cannot apply ${action}` },
        422,
      );
    }

    const next = structuredClone(rule);
    if (edits !== undefined) {
      for (const key of ["pb-conditions", "sol-keep", "sol-remove", "sol-add"] as const) {
        if (edits[key] !== undefined) next[key] = edits[key] as string[];
      }
      if (typeof edits.explanation === "string") next.explanation = edits.explanation;
    }
    if (typeof body.explanation === "string") {
      next.explanation = body.explanation;
    }
    if (action === "accepted") {
      if (next.explanation.trim() === "") {
        return jsonResponse(
          { detail: `rule ${ruleId}: accepted rules need a non-empty explanation` },
          422,
        );
      }
      if (next["pb-conditions"].length === 0) {
        return jsonResponse(
          { detail: `rule ${ruleId}: accepted rules need at least one problem condition` },
          422,
        );
      }
      next.status = "accepted";
    } else if (action === "rejected") {
      next.status = "rejected";
    } else if (action === "reopened") {
      next.status = "candidate";
    }
    this.rules.set(ruleId, next);
    this.sequence += 1;
    return jsonResponse({ rule: next, etag: this.etag() });
  }

  private solve(body: Record<string, unknown>): Response {
    const problem = [...((body.problem as string[]) ?? [])].sort();
    if (problem.includes("zz")) {
      return jsonResponse({ detail: fixtures.solve_unknown_detail }, 422);
    }
    const key = problem.join(",");
    if (key === "c,d") {
      return jsonResponse(
        this.patternAccepted() ? fixtures.solve_cd_accepted : fixtures.solve_cd_no_rules,
      );
    }
    if (key === "b,c,d") {
      return jsonResponse(fixtures.solve_bcd_identity);
    }
    if (key === "c" && this.patternAccepted()) {
      return jsonResponse(fixtures.solve_c_accepted);
    }
    return jsonResponse({ detail: `mock: no canned solve for {${key}}` }, 500);
  }
}

export { fixtures };
