/** Canonical item strings look like "pb:-:a": facet, polarity, property.
 * Parsing and regrouping are lossless; rendering code round-trips through
 * these helpers so what the analyst reads is exactly what the miner wrote. */

export type Facet = "pb" | "sol";
export type Polarity = "-" | "=" | "+";

export interface Item {
  facet: Facet;
  polarity: Polarity;
  prop: string;
}

export function parseItem(text: string): Item {
  const first = text.indexOf(":");
  const second = text.indexOf(":", first + 1);
  if (first < 0 || second < 0) {
    throw new Error(`not an item: ${JSON.stringify(text)}`);
  }
  const facet = text.slice(0, first);
  const polarity = text.slice(first + 1, second);
  const prop = text.slice(second + 1);
  if (facet !== "pb" && facet !== "sol") {
    throw new Error(`unknown facet in ${JSON.stringify(text)}`);
  }
  if (polarity !== "-" && polarity !== "=" && polarity !== "+") {
    throw new Error(`unknown polarity in ${JSON.stringify(text)}`);
  }
  if (!prop) {
    throw new Error(`empty property in ${JSON.stringify(text)}`);
  }
  return { facet, polarity, prop };
}

export function formatItem(item: Item): string {
  return `${item.facet}:${item.polarity}:${item.prop}`;
}

export const POLARITIES: readonly Polarity[] = ["-", "=", "+"];

export type FacetColumns = Record<Polarity, string[]>;

export interface GroupedItems {
  pb: FacetColumns;
  sol: FacetColumns;
}

/** Split item strings into the three-column-per-facet layout the detail
 * panes render. Columns keep the incoming order, which is already the
 * canonical item order. */
export function groupItems(texts: string[]): GroupedItems {
  const fresh = (): FacetColumns => ({ "-": [], "=": [], "+": [] });
  const grouped: GroupedItems = { pb: fresh(), sol: fresh() };
  for (const text of texts) {
    const item = parseItem(text);
    grouped[item.facet][item.polarity].push(item.prop);
  }
  return grouped;
}

/** Inverse of groupItems over the same facet/polarity walk order. */
export function ungroupItems(grouped: GroupedItems): string[] {
  const out: string[] = [];
  for (const facet of ["pb", "sol"] as const) {
    for (const polarity of POLARITIES) {
      for (const prop of grouped[facet][polarity]) {
        out.push(formatItem({ facet, polarity, prop }));
      }
    }
  }
  return out;
}

/** "9/30" -> "30%" (displayed next to the raw count, never instead of it). */
export function supportPercent(fraction: string): string {
  const [num, den] = fraction.split("/").map(Number);
  if (!den || num === undefined || Number.isNaN(num)) return "?";
  return `${Math.round((num / den) * 1000) / 10}%`;
}
