/** Paginated KWIC table. Row numbers, contexts and annotations all come
 * from the service verbatim; clicking a row loads its sentence detail and
 * clicking a value there feeds the exploration loop back into the query
 * builder. */

import { ConstraintKey, QueryResponse, SentenceDetail } from "../types.js";
import { VNode, h } from "../vdom.js";

export interface ConcordanceCallbacks {
  onPage(offset: number): void;
  onExpand(line: { textId: string; sentenceIndex: number }): void;
  onAddConstraint(key: ConstraintKey, value: string): void;
}

export interface ConcordanceViewState {
  result: QueryResponse | null;
  expanded: { textId: string; sentenceIndex: number } | null;
  detail: SentenceDetail | null;
  pending: boolean;
}

function chip(cb: ConcordanceCallbacks, key: ConstraintKey,
              value: string, label?: string): VNode {
  return h("button", {
    class: "value-chip", type: "button", "data-key": key, "data-value": value,
    title: `ajouter ${key}="${value}" à la requête`,
    onClick: () => cb.onAddConstraint(key, value),
  }, label ?? value);
}

function detailPanel(detail: SentenceDetail, cb: ConcordanceCallbacks): VNode {
  return h("div", { class: "sentence-detail" },
    h("p", { class: "full-sentence" },
      detail.tokens.map((t) => t.surface).join(" ")),
    h("table", { class: "token-table" },
      h("thead", {}, h("tr", {},
        h("th", {}, "forme"), h("th", {}, "lemme"),
        h("th", {}, "catégorie"), h("th", {}, "traits"))),
      h("tbody", {}, detail.tokens.map((t) => h("tr", {},
        h("td", {}, t.surface),
        h("td", {}, chip(cb, "lemma", t.lemma)),
        h("td", {}, chip(cb, "pos", t.pos)),
        h("td", {}, t.traits.map((tr) => chip(cb, "trait", tr))))))),
    detail.spans.length
      ? h("ul", { class: "span-list" }, detail.spans.map((s) => h("li", {},
          chip(cb, "cat", s.category),
          ` [${s.firstToken}..${s.lastToken}]`,
          s.correctedForm ? ` → ${s.correctedForm}` : "")))
      : h("p", { class: "no-spans" }, "aucune annotation d'erreur"));
}

export function renderConcordance(state: ConcordanceViewState,
                                  cb: ConcordanceCallbacks): VNode {
  const result = state.result;
  if (!result) {
    return h("div", { class: "concordance empty" },
      h("p", { class: "hint" }, "lancez une recherche"));
  }
  if (result.total === 0) {
    return h("div", { class: "concordance empty" },
      h("p", { class: "empty-state" },
        "aucun résultat pour ", h("code", { class: "dsl" }, result.dsl)));
  }
  const rows = result.lines.map((line) => {
    const isExpanded = state.expanded !== null
      && state.expanded.textId === line.textId
      && state.expanded.sentenceIndex === line.sentenceIndex;
    const tr = h("tr", {
      class: `line ${isExpanded ? "expanded" : ""}`,
      "data-no": line.no,
      onClick: () => cb.onExpand(
        { textId: line.textId, sentenceIndex: line.sentenceIndex }),
    },
      h("td", { class: "no" }, String(line.no)),
      h("td", { class: "texte" }, line.textId),
      h("td", { class: "left" }, line.left),
      h("td", { class: "mot" }, h("strong", {}, line.keyword)),
      h("td", { class: "right" }, line.right));
    if (!isExpanded || !state.detail) return [tr];
    return [tr, h("tr", { class: "detail-row" },
      h("td", { colspan: 5 }, detailPanel(state.detail, cb)))];
  });
  const lastPageStart = result.offset + result.lines.length;
  return h("div", { class: "concordance" },
    h("table", { class: "kwic" },
      h("thead", {}, h("tr", {},
        h("th", {}, "No"), h("th", {}, "Texte"),
        h("th", {}, "Contexte gauche"), h("th", {}, "Mot"),
        h("th", {}, "Contexte droit"))),
      h("tbody", {}, rows.flat())),
    h("div", { class: "pager" },
      h("button", {
        class: "prev", type: "button",
        disabled: result.offset === 0 || state.pending || undefined,
        onClick: () => cb.onPage(Math.max(0, result.offset - result.limit)),
      }, "précédent"),
      h("span", { class: "page-info" },
        `${result.offset + 1}–${lastPageStart} / ${result.total}`),
      h("button", {
        class: "next", type: "button",
        disabled: lastPageStart >= result.total || state.pending || undefined,
        onClick: () => cb.onPage(result.offset + result.limit),
      }, "suivant")));
}
