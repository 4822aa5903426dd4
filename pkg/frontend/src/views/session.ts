/** Exercise player: stem with the blank, free-text entry (or option
 * buttons when the item carries distractors), per-answer feedback, and
 * the final report with the error-rate threshold flag. */

import { AnswerFeedback, GapFillItem, SessionReport } from "../types.js";
import { VNode, h } from "../vdom.js";

export interface SessionCallbacks {
  onAnswer(text: string): void;
  onRestart(): void;
}

export interface SessionViewState {
  current: GapFillItem | null;
  lastFeedback: AnswerFeedback | null;
  report: SessionReport | null;
  entry: string;
  onEntryChange(text: string): void;
}

function options(item: GapFillItem, cb: SessionCallbacks): VNode {
  // Recognition mode: the annotated answer among its distractors,
  // alphabetically so the position gives nothing away.
  const choices = [...item.distractors, item.answer].sort();
  return h("div", { class: "choices" },
    choices.map((choice) => h("button", {
      class: "choice", type: "button", "data-choice": choice,
      onClick: () => cb.onAnswer(choice),
    }, choice)));
}

function freeEntry(state: SessionViewState, cb: SessionCallbacks): VNode {
  return h("form", {
    class: "free-entry",
    onSubmit: (e: Event) => {
      e.preventDefault();
      cb.onAnswer(state.entry);
    },
  },
    h("input", {
      class: "answer-entry", type: "text", value: state.entry,
      placeholder: "votre réponse",
      onInput: (e: Event) =>
        state.onEntryChange((e.target as HTMLInputElement).value),
    }),
    h("button", { type: "submit" }, "Répondre"));
}

function stemView(item: GapFillItem): VNode {
  const parts = item.stem.split("____");
  const children: (VNode | string)[] = [];
  parts.forEach((part, i) => {
    if (i > 0) children.push(h("span", { class: "blank" }, "____"));
    children.push(part);
  });
  return h("p", { class: "stem" }, ...children);
}

function reportView(report: SessionReport, cb: SessionCallbacks): VNode {
  const percent = (report.errorRate * 100).toFixed(1);
  return h("div", { class: "report" },
    h("h3", {}, "Bilan de la session"),
    h("p", { class: "totals" },
      `${report.totalResponses} réponses, ${report.errorCount} erreurs ` +
      `(${percent}%)`),
    h("p", {
      class: `threshold ${report.thresholdExceeded ? "exceeded" : "ok"}`,
    }, report.thresholdExceeded
      ? "taux d'erreur au-dessus du seuil : reprendre la série"
      : "taux d'erreur dans le seuil"),
    h("table", { class: "history" },
      h("thead", {}, h("tr", {},
        h("th", {}, "source"), h("th", {}, "réponse"),
        h("th", {}, "correct"), h("th", {}, "rattrapage"))),
      h("tbody", {}, report.history.map((entry) => h("tr", {},
        h("td", {}, entry.source.join(":")),
        h("td", {}, entry.answer),
        h("td", { class: entry.correct ? "yes" : "no" },
          entry.correct ? "oui" : "non"),
        h("td", {}, entry.remedial ? "oui" : ""))))),
    h("button", { class: "restart", type: "button", onClick: cb.onRestart },
      "Nouvelle série"));
}

export function renderSession(state: SessionViewState,
                              cb: SessionCallbacks): VNode {
  if (state.report) {
    return h("div", { class: "session finished" },
      reportView(state.report, cb));
  }
  if (!state.current) {
    return h("div", { class: "session idle" },
      h("p", { class: "hint" }, "générez une série d'exercices"));
  }
  const feedback = state.lastFeedback
    ? h("p", {
        class: `feedback ${state.lastFeedback.correct ? "correct" : "incorrect"}`,
      }, state.lastFeedback.correct ? "Correct !" : "Incorrect, réessayez :")
    : null;
  return h("div", { class: "session active" },
    feedback,
    stemView(state.current),
    state.current.distractors.length
      ? options(state.current, cb)
      : freeEntry(state, cb));
}
