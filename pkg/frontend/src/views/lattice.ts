/** Itemset browser: support-sorted list with min-support and substring
 * filters, and a detail pane with the facet columns, parent/child links,
 * the rule status badge, and lazily fetched supporting pairs. */

import type { AppContext } from "../context.js";
import { itemGrids } from "../facets.js";
import { supportPercent } from "../items.js";
import type { FciPayload } from "../types.js";
import { el, clear, statusBadge } from "../ui.js";

export class LatticeView {
  readonly element = el("section", { class: "lattice-wrap" });
  private listSlot = el("div", {});
  private detailSlot = el("div", { class: "fci-detail" }, el("p", { class: "muted" }, "Pick an itemset."));
  private minSupport = "";
  private substring = "";
  private page: FciPayload[] = [];
  private selected: number | null = null;
  private pairsCache = new Map<number, HTMLElement>();

  constructor(private ctx: AppContext) {
    const minSupportInput = el("input", {
      type: "text",
      placeholder: "min support, e.g. 0.3",
      oninput: (event) => {
        this.minSupport = (event.target as HTMLInputElement).value.trim();
      },
      onchange: () => void this.render(),
    });
    const substringInput = el("input", {
      type: "text",
      placeholder: "filter items, e.g. sol:+:",
      oninput: (event) => {
        this.substring = (event.target as HTMLInputElement).value;
        this.renderList();
      },
    });
    const controls = el("div", { class: "fci-controls" }, minSupportInput, substringInput);
    this.element.append(
      el("div", { class: "fci-list" }, controls, this.listSlot),
      this.detailSlot,
    );
  }

  async render(): Promise<void> {
    const page = await this.ctx.track(
      this.ctx.api.fcis(this.minSupport ? { minSupport: this.minSupport } : {}),
    );
    this.ctx.setEtag(page.etag);
    const listing = await this.ctx.track(this.ctx.api.rules());
    this.ctx.cacheRules(listing.rules);
    this.page = page.fcis;
    this.renderList();
  }

  /** The substring filter runs client-side over the canonical item strings
   * of the fetched page. */
  private renderList(): void {
    clear(this.listSlot);
    const shown = this.page.filter(
      (fci) =>
        this.substring === "" ||
        fci.items.some((item) => item.includes(this.substring)),
    );
    for (const fci of shown) {
      const row = el(
        "div",
        {
          class: `fci-row${fci.id === this.selected ? " selected" : ""}`,
          "data-fci": String(fci.id),
          onclick: () => void this.select(fci.id),
        },
        el("span", { class: "items" }, fci.items.join(" ") || "(empty)"),
        el("span", { class: "support" }, `${fci.support} (${supportPercent(fci.support)})`),
      );
      this.listSlot.append(row);
    }
    if (shown.length === 0) {
      this.listSlot.append(el("p", { class: "muted", style: "padding: 0.6rem" }, "No itemsets match."));
    }
  }

  async select(id: number): Promise<void> {
    const fci = await this.ctx.track(this.ctx.api.fci(id));
    this.selected = id;
    this.renderList();
    clear(this.detailSlot);

    const ruleId = fci["rule-id"];
    const status = ruleId !== null ? this.ctx.ruleStatus(ruleId) : null;
    this.detailSlot.append(
      el(
        "h3",
        {},
        `itemset ${fci.id} `,
        status !== null ? statusBadge(status) : el("span", { class: "muted small" }, "no rule"),
      ),
      el(
        "div",
        { class: "small muted" },
        `support ${fci.support} (${supportPercent(fci.support)})`,
      ),
    );
    for (const grid of itemGrids(fci.items)) this.detailSlot.append(grid);

    const nav = el("div", { class: "nav small" });
    for (const parent of fci.parents) {
      nav.append(el("a", { onclick: () => void this.select(parent) }, `↑ ${parent}`));
    }
    for (const child of fci.children) {
      nav.append(el("a", { onclick: () => void this.select(child) }, `↓ ${child}`));
    }
    if (fci.parents.length + fci.children.length > 0) {
      this.detailSlot.append(el("div", { class: "small muted" }, "more general ↑ / more specific ↓"), nav);
    }

    const pairsSlot = el("div", {});
    const cached = this.pairsCache.get(id);
    if (cached !== undefined) {
      pairsSlot.append(cached);
    } else {
      pairsSlot.append(
        el(
          "button",
          {
            onclick: async () => {
              const examples = await this.ctx.track(this.ctx.api.examples(id));
              const list = el("ul", { class: "pair-list" });
              for (const example of examples.examples) {
                list.append(
                  el(
                    "li",
                    {},
                    `${example.pair[0]} → ${example.pair[1]}: `,
                    el("code", {}, example.items.join(" ")),
                  ),
                );
              }
              const block = el(
                "div",
                {},
                el("h4", {}, `Supporting pairs (${examples.count})`),
                list,
              );
              this.pairsCache.set(id, block);
              pairsSlot.replaceChildren(block);
            },
          },
          "Load supporting pairs",
        ),
      );
    }
    this.detailSlot.append(pairsSlot);
  }
}
