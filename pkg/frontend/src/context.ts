/** What every view gets from the application shell. */

import type { Api } from "./api.js";
import type { RulePayload, RuleStatus } from "./types.js";

export interface AppContext {
  api: Api;
  /** Latest etag seen from the service; sent with every mutation. */
  etag(): string;
  setEtag(etag: string): void;
  /** Rule statuses for badges; refreshed whenever a view fetches rules. */
  cacheRules(rules: RulePayload[]): void;
  ruleStatus(ruleId: number): RuleStatus | null;
  /** Jump to the lattice tab with one itemset selected. */
  openFci(id: number): void;
  /** Register an in-flight request: failures raise the unreachable banner,
   * and tests await idle() on the registered set. */
  track<T>(promise: Promise<T>): Promise<T>;
}
