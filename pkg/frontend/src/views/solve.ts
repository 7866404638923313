/** Trial solving: the analyst assembles a target problem as property chips
 * and every change re-solves immediately, so rule coverage can be probed
 * before accepting more rules. No-solution reports render as per-case
 * diagnostics with unmet-condition chips. */

import type { AppContext } from "../context.js";
import type { SolveResult } from "../types.js";
import { ApiError } from "../api.js";
import { el, clear } from "../ui.js";

export class SolveView {
  readonly element = el("section", { class: "solve-wrap" });
  private chipRow = el("div", { class: "chip-row" });
  private resultSlot = el("div", {});
  private errorSlot = el("div", { class: "field-error" });
  private target: string[] = [];

  constructor(private ctx: AppContext) {
    const input = el("input", {
      type: "text",
      placeholder: "add a problem property and press Enter",
      onkeydown: (event) => {
        const keyboard = event as KeyboardEvent;
        if (keyboard.key !== "Enter") return;
        const box = event.target as HTMLInputElement;
        const value = box.value.trim();
        if (value && !this.target.includes(value)) {
          this.target.push(value);
          box.value = "";
          void this.refresh();
        }
      },
    });
    this.element.append(
      el("h2", {}, "Trial solve"),
      el("label", { class: "small muted" }, "Target problem properties"),
      input,
      this.chipRow,
      this.errorSlot,
      this.resultSlot,
    );
  }

  async render(): Promise<void> {
    await this.refresh();
  }

  private async refresh(): Promise<void> {
    this.renderChips();
    this.errorSlot.textContent = "";
    if (this.target.length === 0) {
      clear(this.resultSlot).append(
        el("p", { class: "muted" }, "Add properties to solve for them."),
      );
      return;
    }
    try {
      const result = await this.ctx.track(this.ctx.api.solve([...this.target]));
      this.renderResult(result);
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.errorSlot.textContent = err.detail;
        clear(this.resultSlot);
      } else {
        throw err;
      }
    }
  }

  private renderChips(): void {
    clear(this.chipRow);
    for (const prop of this.target) {
      this.chipRow.append(
        el(
          "span",
          { class: "chip", "data-prop": prop },
          prop,
          el(
            "button",
            {
              "aria-label": `remove ${prop}`,
              onclick: () => {
                this.target = this.target.filter((p) => p !== prop);
                void this.refresh();
              },
            },
            "×",
          ),
        ),
      );
    }
  }

  private renderResult(result: SolveResult): void {
    clear(this.resultSlot);
    const panel = el("div", { class: "solve-result" });
    if (result.solution !== null) {
      panel.append(
        el("h3", {}, "Solution"),
        el("div", { class: "solution" }, `{${result.solution.join(", ")}}`),
        el(
          "div",
          { class: "small muted" },
          `reusing ${result["used-case"] ?? "?"} at similarity ${result.similarity ?? "?"}`,
        ),
      );
      for (const step of result.trace ?? []) {
        panel.append(
          el(
            "div",
            { class: "trace-step" },
            el(
              "div",
              {},
              `rule ${step["rule-id"]}: removed {${step.removed.join(", ")}}, ` +
                `added {${step.added.join(", ")}}`,
            ),
            el("div", { class: "explanation" }, step.explanation),
          ),
        );
      }
      if ((result["used-rules"] ?? []).length === 0) {
        panel.append(
          el("div", { class: "small muted" }, "identical problem found; solution reused as-is"),
        );
      }
    } else {
      panel.append(el("h3", {}, "No solution"));
      for (const diag of result.diagnostics ?? []) {
        const block = el("div", { class: "diag" });
        block.append(
          el(
            "div",
            { class: "head" },
            `${diag.case} (similarity ${diag.similarity}), nearest rule: ` +
              `${diag["nearest-rule"] ?? "none"}`,
          ),
        );
        const chips = el("div", { class: "chip-row" });
        for (const item of diag["unmet-pb"]) {
          chips.append(el("span", { class: "chip unmet" }, item));
        }
        for (const prop of diag["sol-missing"]) {
          chips.append(el("span", { class: "chip unmet" }, `sol needs ${prop}`));
        }
        for (const prop of diag["sol-present"]) {
          chips.append(el("span", { class: "chip unmet" }, `sol already has ${prop}`));
        }
        if (!chips.hasChildNodes()) {
          chips.append(el("span", { class: "muted small" }, "no rule came close"));
        }
        block.append(chips);
        panel.append(block);
      }
    }
    this.resultSlot.append(panel);
  }
}
