import { readFileSync } from "node:fs";
import { describe, expect, it, vi } from "vitest";

import { ConstraintKey, QueryResponse, SentenceDetail } from "../src/types.js";
import { byClass, byTag, textOf } from "../src/vdom.js";
import { renderConcordance } from "../src/views/concordance.js";

const reference: QueryResponse = JSON.parse(readFileSync(
  new URL("./fixtures/reference-query-response.json", import.meta.url),
  "utf-8"));

const noop = { onPage: () => {}, onExpand: () => {},
               onAddConstraint: () => {} };

function renderedRows(result: QueryResponse) {
  const tree = renderConcordance(
    { result, expanded: null, detail: null, pending: false }, noop);
  return byClass(tree, "line");
}

describe("concordance table", () => {
  it("renders the twelve reference rows with the column mapping", () => {
    const rows = renderedRows(reference);
    expect(rows).toHaveLength(12);
    rows.forEach((row, i) => {
      const line = reference.lines[i];
      const [no, texte, left, mot, right] = byTag(row, "td");
      // Every displayed datum is the API's, verbatim.
      expect(textOf(no)).toBe(String(line.no));
      expect(textOf(texte)).toBe(line.textId);
      expect(textOf(left)).toBe(line.left);
      expect(textOf(mot)).toBe(line.keyword);
      expect(textOf(right)).toBe(line.right);
    });
    expect(textOf(byClass(rows[0], "mot")[0])).toBe("connais");
    expect(textOf(byClass(rows[0], "texte")[0])).toBe("2180");
  });

  it("emphasizes the keyword column", () => {
    const rows = renderedRows(reference);
    for (const row of rows) {
      const emphasized = byTag(byClass(row, "mot")[0], "strong");
      expect(emphasized).toHaveLength(1);
    }
  });

  it("renders server row numbers verbatim on later pages", () => {
    const page2: QueryResponse = {
      ...reference,
      offset: 5,
      limit: 3,
      lines: reference.lines.slice(5, 8).map((line, i) => ({
        ...line, no: 6 + i,
      })),
    };
    const rows = renderedRows(page2);
    expect(rows.map((r) => textOf(byTag(r, "td")[0]))).toEqual(["6", "7", "8"]);
    const tree = renderConcordance(
      { result: page2, expanded: null, detail: null, pending: false }, noop);
    expect(textOf(byClass(tree, "page-info")[0])).toBe("6–8 / 12");
  });

  it("wires the pager to offset requests", () => {
    const onPage = vi.fn();
    const page2 = { ...reference, offset: 5, limit: 3,
                    lines: reference.lines.slice(5, 8) };
    const tree = renderConcordance(
      { result: page2, expanded: null, detail: null, pending: false },
      { ...noop, onPage });
    (byClass(tree, "prev")[0].props.onClick as () => void)();
    (byClass(tree, "next")[0].props.onClick as () => void)();
    expect(onPage).toHaveBeenNthCalledWith(1, 2);
    expect(onPage).toHaveBeenNthCalledWith(2, 8);
  });

  it("disables the pager at the edges", () => {
    const tree = renderConcordance(
      { result: reference, expanded: null, detail: null, pending: false },
      noop);
    expect(byClass(tree, "prev")[0].props.disabled).toBe(true);
    expect(byClass(tree, "next")[0].props.disabled).toBe(true); // 12 of 12
  });

  it("shows an empty state echoing the normalized query", () => {
    const empty = { ...reference, total: 0, lines: [] };
    const tree = renderConcordance(
      { result: empty, expanded: null, detail: null, pending: false }, noop);
    const state = byClass(tree, "empty-state");
    expect(state).toHaveLength(1);
    expect(textOf(state[0])).toContain(reference.dsl);
  });

  it("expands a row into its sentence detail with clickable values", () => {
    const detail: SentenceDetail = {
      textId: "2212", sentenceIndex: 0, l1: "dutch", level: "B2",
      tokens: [
        { tokenIndex: 0, surface: "L'", lemma: "le", pos: "det", traits: [] },
        { tokenIndex: 1, surface: "imprimeur", lemma: "imprimeur",
          pos: "nom", traits: [] },
      ],
      spans: [{ category: "GRA-PP-AGR", firstToken: 3, lastToken: 3,
                correctedForm: "reçu" }],
    };
    const added: [ConstraintKey, string][] = [];
    const tree = renderConcordance({
      result: reference,
      expanded: { textId: "2212", sentenceIndex: 0 },
      detail,
      pending: false,
    }, { ...noop, onAddConstraint: (k, v) => added.push([k, v]) });
    const panel = byClass(tree, "sentence-detail");
    expect(panel).toHaveLength(1);
    expect(textOf(byClass(panel[0], "full-sentence")[0]))
      .toBe("L' imprimeur");
    const chips = byClass(panel[0], "value-chip");
    const lemmaChip = chips.find((c) => c.props["data-key"] === "lemma"
                                 && c.props["data-value"] === "imprimeur")!;
    (lemmaChip.props.onClick as () => void)();
    const catChip = chips.find((c) => c.props["data-key"] === "cat")!;
    (catChip.props.onClick as () => void)();
    expect(added).toEqual([["lemma", "imprimeur"], ["cat", "GRA-PP-AGR"]]);
  });
});
