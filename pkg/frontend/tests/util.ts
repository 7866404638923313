/** Shared helpers for driving the app inside jsdom. */

import { vi } from "vitest";

import { Api } from "../src/api.js";
import { App } from "../src/main.js";
import type { MockService } from "./mock.js";

export function boot(service: MockService): { app: App; root: HTMLElement } {
  vi.stubGlobal("fetch", service.fetch);
  const root = document.createElement("div");
  document.body.append(root);
  return { app: new App(root, new Api()), root };
}

/** Waits until the app has no in-flight requests, pumping the event loop a
 * few times so chained renders get a chance to start. */
export async function settle(app: App): Promise<void> {
  for (let i = 0; i < 4; i += 1) {
    await app.idle();
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function typeInto(
  field: HTMLInputElement | HTMLTextAreaElement,
  text: string,
): void {
  field.value = text;
  field.dispatchEvent(new Event("input", { bubbles: true }));
}

export function pressEnter(field: HTMLInputElement, text: string): void {
  field.value = text;
  field.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
}

export function mustFind<T extends Element>(scope: ParentNode, selector: string): T {
  const found = scope.querySelector<T>(selector);
  if (found === null) throw new Error(`nothing matches ${selector}`);
  return found;
}
