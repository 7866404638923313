/** Application shell: topbar with workspace facts, three tabs (queue,
 * lattice, trial solve), and the unreachable-service banner. The queue is
 * the landing view. */

import { Api, Unreachable } from "./api.js";
import type { AppContext } from "./context.js";
import type { RulePayload, RuleStatus } from "./types.js";
import { el, clear } from "./ui.js";
import { LatticeView } from "./views/lattice.js";
import { QueueView } from "./views/queue.js";
import { SolveView } from "./views/solve.js";

type TabName = "queue" | "lattice" | "solve";

export class App implements AppContext {
  readonly api: Api;
  private currentEtag = "";
  private rulesById = new Map<number, RulePayload>();
  private pending = new Set<Promise<unknown>>();

  private banner: HTMLElement;
  private metaSlot: HTMLElement;
  private mainSlot: HTMLElement;
  private tabButtons = new Map<TabName, HTMLButtonElement>();

  readonly queue: QueueView;
  readonly lattice: LatticeView;
  readonly solve: SolveView;
  private active: TabName = "queue";

  constructor(
    root: HTMLElement,
    api: Api = new Api(),
  ) {
    this.api = api;
    this.metaSlot = el("span", { class: "meta" });
    this.banner = el("div", { class: "banner hidden" });
    this.mainSlot = el("main", {});

    const tabs = el("div", { class: "tabs" });
    const define = (name: TabName, label: string) => {
      const button = el(
        "button",
        { onclick: () => void this.showTab(name) },
        label,
      ) as HTMLButtonElement;
      this.tabButtons.set(name, button);
      tabs.append(button);
    };
    define("queue", "Review queue");
    define("lattice", "Itemset lattice");
    define("solve", "Trial solve");

    root.append(
      el("div", { class: "topbar" }, el("h1", {}, "adaptmine review"), this.metaSlot, tabs),
      this.banner,
      this.mainSlot,
    );

    this.queue = new QueueView(this);
    this.lattice = new LatticeView(this);
    this.solve = new SolveView(this);
  }

  etag(): string {
    return this.currentEtag;
  }

  setEtag(etag: string): void {
    this.currentEtag = etag;
  }

  cacheRules(rules: RulePayload[]): void {
    for (const rule of rules) this.rulesById.set(rule.id, rule);
  }

  ruleStatus(ruleId: number): RuleStatus | null {
    return this.rulesById.get(ruleId)?.status ?? null;
  }

  openFci(id: number): void {
    void this.showTab("lattice").then(() => this.lattice.select(id));
  }

  track<T>(promise: Promise<T>): Promise<T> {
    this.pending.add(promise);
    promise
      .catch((err) => {
        if (err instanceof Unreachable) this.showBanner();
      })
      .finally(() => this.pending.delete(promise));
    return promise;
  }

  /** Resolves when every tracked request has settled; used by tests. */
  async idle(): Promise<void> {
    while (this.pending.size > 0) {
      await Promise.allSettled([...this.pending]);
    }
  }

  private showBanner(): void {
    this.banner.classList.remove("hidden");
    this.banner.replaceChildren(
      el("span", {}, "The review service is unreachable."),
      el("button", { onclick: () => void this.start() }, "Retry"),
    );
  }

  private hideBanner(): void {
    this.banner.classList.add("hidden");
  }

  async start(): Promise<void> {
    try {
      const summary = await this.track(this.api.workspace());
      this.hideBanner();
      this.currentEtag = summary.etag;
      this.metaSlot.textContent =
        `${summary["n-cases"]} cases · ${summary["n-transactions"]} transactions · ` +
        `${summary["n-fcis"]} itemsets · ${summary["n-rules"]} rules · sigma ${summary.sigma}`;
      await this.showTab("queue");
    } catch (err) {
      if (!(err instanceof Unreachable)) throw err;
    }
  }

  async showTab(name: TabName): Promise<void> {
    this.active = name;
    for (const [tab, button] of this.tabButtons) {
      button.classList.toggle("active", tab === name);
    }
    clear(this.mainSlot);
    if (name === "queue") {
      this.mainSlot.append(this.queue.element);
      await this.queue.render();
    } else if (name === "lattice") {
      this.mainSlot.append(this.lattice.element);
      await this.lattice.render();
    } else {
      this.mainSlot.append(this.solve.element);
      await this.solve.render();
    }
  }

  activeTab(): TabName {
    return this.active;
  }
}

export function initApp(root: HTMLElement, api?: Api): App {
  const app = new App(root, api);
  void app.start();
  return app;
}

const mount = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mount !== null) {
  initApp(mount);
}
