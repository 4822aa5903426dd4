/** Ranked error-frequency table with l1/level/depth filters. */

import { Catalog, StatsResponse } from "../types.js";
import { VNode, h } from "../vdom.js";

export interface StatsCallbacks {
  onFilter(params: { depth: number; l1: string; level: string }): void;
}

export interface StatsViewState {
  catalog: Catalog | null;
  response: StatsResponse | null;
  depth: number;
  l1: string;
  level: string;
}

export function renderStats(state: StatsViewState,
                            cb: StatsCallbacks): VNode {
  const selector = (name: "l1" | "level", values: string[]) =>
    h("select", {
      class: `filter-${name}`,
      onChange: (e: Event) => cb.onFilter({
        depth: state.depth, l1: state.l1, level: state.level,
        [name]: (e.target as HTMLSelectElement).value,
      } as { depth: number; l1: string; level: string }),
    },
      h("option", { value: "", selected: state[name] === "" || undefined },
        "(toutes)"),
      values.map((v) => h("option",
        { value: v, selected: state[name] === v || undefined }, v)));
  const table = state.response === null
    ? h("p", { class: "hint" }, "aucun profil chargé")
    : state.response.rows.length === 0
      ? h("p", { class: "empty-state" }, "aucune erreur sous ce filtre")
      : h("table", { class: "stats" },
          h("thead", {}, h("tr", {},
            h("th", {}, "catégorie"), h("th", {}, "occurrences"),
            h("th", {}, "fréquence relative"))),
          h("tbody", {}, state.response.rows.map((row) => h("tr", {},
            h("td", { class: "category" }, row.category),
            h("td", { class: "count" }, String(row.count)),
            h("td", { class: "rel" },
              (row.relativeFrequency * 100).toFixed(1) + " %")))));
  return h("div", { class: "stats-view" },
    h("div", { class: "stats-filters" },
      h("label", {}, "profondeur ",
        h("input", {
          type: "number", class: "filter-depth", min: 1,
          value: state.depth,
          onInput: (e: Event) => cb.onFilter({
            depth: Number((e.target as HTMLInputElement).value) || 1,
            l1: state.l1, level: state.level,
          }),
        })),
      selector("l1", state.catalog?.l1 ?? []),
      selector("level", state.catalog?.levels ?? [])),
    table);
}
