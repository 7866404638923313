/** The landing page: candidate rules waiting for a decision, each with its
 * conditions laid out in facet columns and a full editor. Decided rules
 * drop to a collapsed list below, from which they can be reopened. */

import type { AppContext } from "../context.js";
import { RuleEditor } from "../editor.js";
import { itemGrids } from "../facets.js";
import type { RulePayload } from "../types.js";
import { el, clear, statusBadge } from "../ui.js";

function ruleItems(rule: RulePayload): string[] {
  return [
    ...rule["pb-conditions"],
    ...rule["sol-remove"].map((p) => `sol:-:${p}`),
    ...rule["sol-keep"].map((p) => `sol:=:${p}`),
    ...rule["sol-add"].map((p) => `sol:+:${p}`),
  ];
}

export class QueueView {
  readonly element = el("section", { class: "queue" });

  constructor(private ctx: AppContext) {}

  async render(): Promise<void> {
    const listing = await this.ctx.track(this.ctx.api.rules());
    this.ctx.setEtag(listing.etag);
    this.ctx.cacheRules(listing.rules);
    clear(this.element);

    const pending = listing.rules.filter((r) => r.status === "candidate");
    const decided = listing.rules.filter((r) => r.status !== "candidate");

    this.element.append(
      el("h2", {}, `Pending rules (${pending.length})`),
      pending.length === 0
        ? el("p", { class: "muted" }, "Nothing waiting for review.")
        : "",
    );

    for (const rule of pending) {
      this.element.append(this.entry(rule));
    }

    if (decided.length > 0) {
      const details = el("details", {}, el("summary", {}, `Decided (${decided.length})`));
      for (const rule of decided) {
        details.append(this.decidedEntry(rule));
      }
      this.element.append(details);
    }
  }

  private entry(rule: RulePayload): HTMLElement {
    const editor = new RuleEditor(
      {
        api: this.ctx.api,
        getEtag: () => this.ctx.etag(),
        setEtag: (etag) => this.ctx.setEtag(etag),
        onDecided: () => void this.render(),
        track: (promise) => this.ctx.track(promise),
      },
      rule,
    );
    const container = el("div", { class: "queue-item", "data-rule": String(rule.id) });
    container.append(editor.header());
    for (const grid of itemGrids(ruleItems(rule))) container.append(grid);
    const source = el("a", { onclick: () => this.ctx.openFci(rule["source-fci"]) },
      `itemset ${rule["source-fci"]} and its supporting pairs`);
    container.append(el("div", { class: "small" }, source), editor.element);
    return container;
  }

  private decidedEntry(rule: RulePayload): HTMLElement {
    const container = el("div", { class: "decided-item", "data-rule": String(rule.id) });
    container.append(
      el("h3", {}, `rule ${rule.id} `, statusBadge(rule.status)),
      rule.explanation
        ? el("div", { class: "small muted" }, `"${rule.explanation}"`)
        : "",
      el(
        "button",
        {
          onclick: () =>
            void this.reopen(rule.id),
        },
        "Reopen",
      ),
    );
    return container;
  }

  private async reopen(ruleId: number): Promise<void> {
    const response = await this.ctx.track(
      this.ctx.api.decide(ruleId, { action: "reopen", etag: this.ctx.etag() }),
    );
    this.ctx.setEtag(response.etag);
    await this.render();
  }
}
