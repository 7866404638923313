/** Rendering of itemsets in the three-column-per-facet layout: one column
 * per marker (-, =, +), problem facet above solution facet. The columns are
 * produced by groupItems, so they regroup the canonical strings losslessly. */

import type { FacetColumns } from "./items.js";
import { POLARITIES, groupItems } from "./items.js";
import { el } from "./ui.js";

const FACET_TITLES = { pb: "problem", sol: "solution" } as const;
const POLARITY_TITLES = { "-": "− gone", "=": "= kept", "+": "+ new" } as const;

function facetGrid(facet: "pb" | "sol", columns: FacetColumns): HTMLElement {
  const grid = el("div", { class: "facet-grid", "data-facet": facet });
  for (const polarity of POLARITIES) {
    const column = el(
      "div",
      { class: "col", "data-polarity": polarity },
      el("h4", {}, `${FACET_TITLES[facet]} ${POLARITY_TITLES[polarity]}`),
    );
    const list = el("ul", {});
    for (const prop of columns[polarity]) {
      list.append(el("li", {}, prop));
    }
    column.append(list);
    grid.append(column);
  }
  return grid;
}

/** Both facet grids for a list of canonical item strings; a facet with no
 * items is skipped. */
export function itemGrids(items: string[]): HTMLElement[] {
  const grouped = groupItems(items);
  const out: HTMLElement[] = [];
  for (const facet of ["pb", "sol"] as const) {
    const columns = grouped[facet];
    if (POLARITIES.some((p) => columns[p].length > 0)) {
      out.push(facetGrid(facet, columns));
    }
  }
  return out;
}
