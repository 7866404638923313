/** Per-rule editor: editable condition and solution-edit sets, explanation,
 * dirty flag, and the decision buttons. Mutations carry the current etag;
 * a 409 opens the reload-and-rediff prompt instead of losing either side. */

import type { Api, RuleEdits } from "./api.js";
import { ApiError } from "./api.js";
import type { RulePayload } from "./types.js";
import { el, statusBadge } from "./ui.js";

export interface EditorContext {
  api: Api;
  getEtag(): string;
  setEtag(etag: string): void;
  /** Called after any acknowledged decision so the hosting view refreshes. */
  onDecided(rule: RulePayload): void;
  track<T>(promise: Promise<T>): Promise<T>;
}

interface Fields {
  "pb-conditions": string;
  "sol-keep": string;
  "sol-remove": string;
  "sol-add": string;
  explanation: string;
}

const SET_FIELDS = ["pb-conditions", "sol-keep", "sol-remove", "sol-add"] as const;

function fieldsOf(rule: RulePayload): Fields {
  return {
    "pb-conditions": rule["pb-conditions"].join(" "),
    "sol-keep": rule["sol-keep"].join(" "),
    "sol-remove": rule["sol-remove"].join(" "),
    "sol-add": rule["sol-add"].join(" "),
    explanation: rule.explanation,
  };
}

function splitSet(text: string): string[] {
  return text
    .split(/[\s,]+/)
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .sort();
}

export class RuleEditor {
  readonly element: HTMLElement;
  private rule: RulePayload;
  private fields: Fields;
  private inputs = new Map<keyof Fields, HTMLInputElement | HTMLTextAreaElement>();
  private errorSlots = new Map<keyof Fields | "general", HTMLElement>();
  private conflictSlot: HTMLElement;
  private dirtyFlag: HTMLElement;
  private acceptButton: HTMLButtonElement;

  constructor(
    private ctx: EditorContext,
    rule: RulePayload,
  ) {
    this.rule = rule;
    this.fields = fieldsOf(rule);
    this.element = el("div", { class: "editor", "data-rule": String(rule.id) });
    this.conflictSlot = el("div", {});
    this.dirtyFlag = el("span", { class: "dirty-flag", hidden: true }, "unsaved edits");
    this.acceptButton = el(
      "button",
      { class: "accept", onclick: () => void this.submit("accept") },
      "Accept",
    ) as HTMLButtonElement;
    this.build();
    this.refresh();
  }

  private build(): void {
    const field = (name: keyof Fields, label: string, multiline = false) => {
      const input = multiline
        ? (el("textarea", {}) as HTMLTextAreaElement)
        : (el("input", { type: "text" }) as HTMLInputElement);
      input.value = this.fields[name];
      input.name = name;
      input.addEventListener("input", () => {
        this.fields[name] = input.value;
        this.refresh();
      });
      this.inputs.set(name, input);
      const errorSlot = el("div", { class: "field-error" });
      this.errorSlots.set(name, errorSlot);
      return el("label", {}, label, input, errorSlot);
    };

    const generalError = el("div", { class: "field-error" });
    this.errorSlots.set("general", generalError);

    const actions = el("div", { class: "actions" });
    if (this.rule.status === "candidate") {
      actions.append(
        this.acceptButton,
        el("button", { class: "reject", onclick: () => void this.submit("reject") }, "Reject"),
        el("button", { onclick: () => void this.submit("edit") }, "Save edit"),
      );
    } else {
      actions.append(
        el("button", { onclick: () => void this.submit("reopen") }, "Reopen"),
      );
    }
    actions.append(this.dirtyFlag);

    this.element.append(
      field("pb-conditions", "Problem conditions (items)"),
      field("sol-keep", "Solution: keep"),
      field("sol-remove", "Solution: remove"),
      field("sol-add", "Solution: add"),
      field("explanation", "Explanation", true),
      actions,
      generalError,
      this.conflictSlot,
    );
  }

  private baseline(): Fields {
    return fieldsOf(this.rule);
  }

  isDirty(): boolean {
    const base = this.baseline();
    if (this.fields.explanation !== base.explanation) return true;
    return SET_FIELDS.some(
      (name) => splitSet(this.fields[name]).join(" ") !== splitSet(base[name]).join(" "),
    );
  }

  /** Accept stays disabled while the explanation is empty; the server would
   * refuse with 422 anyway. */
  private refresh(): void {
    this.dirtyFlag.hidden = !this.isDirty();
    const empty = this.fields.explanation.trim().length === 0;
    this.acceptButton.disabled = empty;
    this.acceptButton.title = empty ? "an accepted rule needs an explanation" : "";
  }

  private clearErrors(): void {
    for (const slot of this.errorSlots.values()) slot.textContent = "";
  }

  private edits(): RuleEdits | undefined {
    const base = this.baseline();
    const edits: RuleEdits = {};
    let any = false;
    for (const name of SET_FIELDS) {
      if (splitSet(this.fields[name]).join(" ") !== splitSet(base[name]).join(" ")) {
        edits[name] = splitSet(this.fields[name]);
        any = true;
      }
    }
    if (this.fields.explanation !== base.explanation) {
      edits.explanation = this.fields.explanation;
      any = true;
    }
    return any ? edits : undefined;
  }

  async submit(action: "accept" | "reject" | "edit" | "reopen"): Promise<void> {
    this.clearErrors();
    const body = {
      action,
      etag: this.ctx.getEtag(),
      explanation: action === "accept" ? this.fields.explanation : undefined,
      edits: action === "accept" || action === "edit" ? this.edits() : undefined,
    };
    try {
      const response = await this.ctx.track(this.ctx.api.decide(this.rule.id, body));
      this.ctx.setEtag(response.etag);
      this.rule = response.rule;
      this.fields = fieldsOf(response.rule);
      for (const [name, input] of this.inputs) input.value = this.fields[name];
      this.refresh();
      this.ctx.onDecided(response.rule);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.showConflict();
      } else if (err instanceof ApiError && err.status === 422) {
        this.showFieldError(err.detail);
      } else if (err instanceof ApiError) {
        this.showError("general", err.detail);
      } else {
        throw err;
      }
    }
  }

  private showFieldError(detail: string): void {
    if (detail.toLowerCase().includes("explanation")) {
      this.showError("explanation", detail);
    } else if (detail.toLowerCase().includes("condition")) {
      this.showError("pb-conditions", detail);
    } else {
      this.showError("general", detail);
    }
  }

  private showError(slot: keyof Fields | "general", message: string): void {
    const target = this.errorSlots.get(slot);
    if (target) target.textContent = message;
  }

  /** The workspace moved under this tab. Reload the server's rule and etag,
   * diff them against the unsaved edits, and let the analyst pick a side. */
  private async showConflict(): Promise<void> {
    const [fresh, summary] = await this.ctx.track(
      Promise.all([this.ctx.api.rules(), this.ctx.api.workspace()]),
    );
    const serverRule = fresh.rules.find((r) => r.id === this.rule.id);
    this.ctx.setEtag(summary.etag);

    const prompt = el("div", { class: "conflict", role: "alertdialog" });
    prompt.append(
      el("h4", {}, "Someone else changed this workspace (409). Reload and re-diff:"),
    );
    if (serverRule === undefined) {
      prompt.append(el("div", { class: "diff-line" }, "the rule no longer exists on the server"));
    } else {
      const serverFields = fieldsOf(serverRule);
      const names: (keyof Fields)[] = [...SET_FIELDS, "explanation"];
      let differences = 0;
      for (const name of names) {
        if (this.fields[name] === serverFields[name]) continue;
        differences += 1;
        prompt.append(
          el(
            "div",
            { class: "diff-line" },
            `${name}: yours "${this.fields[name]}" / server "${serverFields[name]}"`,
          ),
        );
      }
      if (serverRule.status !== this.rule.status) {
        prompt.append(
          el("div", { class: "diff-line" }, `status: now ${serverRule.status} on the server`),
        );
      }
      if (differences === 0) {
        prompt.append(el("div", { class: "diff-line" }, "your fields match the server version"));
      }
    }

    const actions = el("div", { class: "actions" });
    actions.append(
      el(
        "button",
        {
          onclick: () => {
            if (serverRule !== undefined) {
              this.rule = serverRule;
              this.fields = fieldsOf(serverRule);
              for (const [name, input] of this.inputs) input.value = this.fields[name];
              this.ctx.onDecided(serverRule);
            }
            prompt.remove();
            this.refresh();
          },
        },
        "Use server version",
      ),
      el(
        "button",
        {
          onclick: () => {
            // Keep the unsaved edits on top of the refreshed etag; the next
            // submit competes fairly.
            if (serverRule !== undefined) this.rule = serverRule;
            prompt.remove();
            this.refresh();
          },
        },
        "Keep my edits",
      ),
    );
    prompt.append(actions);
    this.conflictSlot.replaceChildren(prompt);
  }

  currentRule(): RulePayload {
    return this.rule;
  }

  header(): HTMLElement {
    return el(
      "h3",
      {},
      `rule ${this.rule.id} `,
      statusBadge(this.rule.status),
      el("span", { class: "muted small" }, `  from itemset ${this.rule["source-fci"]}`),
    );
  }
}
