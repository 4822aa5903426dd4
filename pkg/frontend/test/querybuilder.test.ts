import { readFileSync } from "node:fs";
import { describe, expect, it, vi } from "vitest";

import { BuilderState, emptyBuilder } from "../src/builder.js";
import { Catalog, QueryResponse } from "../src/types.js";
import { byClass, byTag, findAll, textOf } from "../src/vdom.js";
import { renderQueryBuilder } from "../src/views/querybuilder.js";

const reference: QueryResponse = JSON.parse(readFileSync(
  new URL("./fixtures/reference-query-response.json", import.meta.url),
  "utf-8"));

const catalog: Catalog = {
  pos: ["det", "verbe"],
  traits: ["participe passé"],
  categories: ["GRA-PP-AGR", "FRM-ACC"],
  l1: ["dutch", "english"],
  levels: ["B1", "B2"],
};

const noop = { onChange: () => {}, onSubmit: () => {} };

function filledForm(): BuilderState {
  return {
    left: [{ rows: [{ key: "lemma", op: "eq", value: "avoir" }],
             quantifier: "one", rangeMin: 0, rangeMax: 1 }],
    keyword: { rows: [
      { key: "pos", op: "eq", value: "verbe" },
      { key: "trait", op: "eq", value: "participe passé" },
      { key: "error", op: "eq", value: "yes" },
    ], quantifier: "one", rangeMin: 0, rangeMax: 1 },
    right: [], l1: [], level: [],
  };
}

describe("query builder view", () => {
  it("shows three zones and the live DSL for a filled form", () => {
    const tree = renderQueryBuilder(
      { builder: filledForm(), catalog, serverError: null }, noop);
    expect(byClass(tree, "zone-left")).toHaveLength(1);
    expect(byClass(tree, "zone-keyword")).toHaveLength(1);
    expect(byClass(tree, "zone-right")).toHaveLength(1);
    expect(textOf(byClass(tree, "dsl")[0])).toBe(reference.dsl);
    expect(byClass(tree, "submit")[0].props.disabled).toBeUndefined();
  });

  it("flags an empty form inline and disables submission", () => {
    const tree = renderQueryBuilder(
      { builder: emptyBuilder(), catalog, serverError: null }, noop);
    expect(textOf(byClass(tree, "form-problem")[0]))
      .toBe("keyword slot required");
    expect(byClass(tree, "submit")[0].props.disabled).toBe(true);
    expect(byClass(tree, "dsl")).toHaveLength(0);
  });

  it("autocompletes values from the corpus catalog", () => {
    const tree = renderQueryBuilder(
      { builder: filledForm(), catalog, serverError: null }, noop);
    const lists = Object.fromEntries(byTag(tree, "datalist").map((d) => [
      d.props.id,
      byTag(d, "option").map((o) => o.props.value),
    ]));
    expect(lists["options-pos"]).toEqual(["det", "verbe"]);
    expect(lists["options-trait"]).toEqual(["participe passé"]);
    expect(lists["options-cat"]).toEqual(["GRA-PP-AGR", "FRM-ACC"]);
    expect(lists["options-error"]).toEqual(["yes", "no"]);
  });

  it("offers the catalog's l1 and level values as document filters", () => {
    const tree = renderQueryBuilder(
      { builder: filledForm(), catalog, serverError: null }, noop);
    const l1Boxes = findAll(byClass(tree, "docfilter-l1")[0],
                            (n) => n.tag === "input");
    expect(l1Boxes.map((b) => b.props.value)).toEqual(["dutch", "english"]);
    const levelBoxes = findAll(byClass(tree, "docfilter-level")[0],
                               (n) => n.tag === "input");
    expect(levelBoxes.map((b) => b.props.value)).toEqual(["B1", "B2"]);
  });

  it("surfaces server errors next to the form", () => {
    const tree = renderQueryBuilder({
      builder: filledForm(), catalog,
      serverError: { message: "unknown constraint key 'zzz'",
                     location: "column 3" },
    }, noop);
    expect(textOf(byClass(tree, "server-error")[0]))
      .toBe("unknown constraint key 'zzz' (column 3)");
  });

  it("submits through the form handler", () => {
    const onSubmit = vi.fn();
    const tree = renderQueryBuilder(
      { builder: filledForm(), catalog, serverError: null },
      { ...noop, onSubmit });
    const form = byClass(tree, "query-builder")[0];
    (form.props.onSubmit as (e: Event) => void)(
      { preventDefault: () => {} } as Event);
    expect(onSubmit).toHaveBeenCalledOnce();
  });
});
