/** Payload shapes of the review service API. The UI renders these as-is;
 * it never derives domain state on its own. */

export interface WorkspaceSummary {
  sigma: string;
  "pair-filter": number | null;
  "n-cases": number;
  "n-transactions": number;
  "n-fcis": number;
  "n-rules": number;
  etag: string;
}

export interface FciPayload {
  id: number;
  items: string[];
  count: number;
  /** Unreduced "count/total" fraction. */
  support: string;
  parents: number[];
  children: number[];
  "rule-id": number | null;
}

export interface FciPage {
  fcis: FciPayload[];
  page: number;
  "page-size": number;
  total: number;
  etag: string;
}

export interface SupportingPair {
  pair: [string, string];
  items: string[];
}

export interface FciExamples {
  fci: number;
  count: number;
  examples: SupportingPair[];
}

export type RuleStatus = "candidate" | "accepted" | "rejected";

export interface RulePayload {
  id: number;
  "source-fci": number;
  "pb-conditions": string[];
  "sol-keep": string[];
  "sol-remove": string[];
  "sol-add": string[];
  status: RuleStatus;
  explanation: string;
}

export interface RuleList {
  rules: RulePayload[];
  etag: string;
}

export interface DecisionResponse {
  rule: RulePayload;
  etag: string;
}

export interface TraceStep {
  "rule-id": number;
  removed: string[];
  added: string[];
  explanation: string;
}

export interface CaseDiagnostic {
  case: string;
  similarity: string;
  "nearest-rule": number | null;
  "unmet-pb": string[];
  "sol-missing": string[];
  "sol-present": string[];
}

export interface SolveResult {
  target: string[];
  solution: string[] | null;
  "used-case"?: string;
  "used-rules"?: number[];
  similarity?: string;
  trace?: TraceStep[];
  diagnostics?: CaseDiagnostic[];
}
