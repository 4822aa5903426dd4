/** Single-page client wiring: corpus picker, search tab (builder +
 * concordance), exercise tab, stats tab. All data comes from the HTTP
 * API; stale responses are discarded by the LatestGate. */

import { ApiClient, ApiRequestError, LatestGate } from "./api.js";
import { BuilderState, addConstraintToKeyword, buildQuery,
         emptyBuilder } from "./builder.js";
import { SessionController } from "./sessioncontroller.js";
import { ConstraintKey, CorpusSummary, QueryResponse, SentenceDetail,
         StatsResponse } from "./types.js";
import { h, mount } from "./vdom.js";
import { renderConcordance } from "./views/concordance.js";
import { renderQueryBuilder } from "./views/querybuilder.js";
import { renderSession } from "./views/session.js";
import { renderStats } from "./views/stats.js";

const PAGE_SIZE = 25;

type Tab = "search" | "exercises" | "stats";

interface AppState {
  corpora: CorpusSummary[];
  corpus: CorpusSummary | null;
  tab: Tab;
  builder: BuilderState;
  serverError: { message: string; location: string | null } | null;
  result: QueryResponse | null;
  expanded: { textId: string; sentenceIndex: number } | null;
  detail: SentenceDetail | null;
  pending: boolean;
  session: SessionController | null;
  entry: string;
  statsResponse: StatsResponse | null;
  statsDepth: number;
  statsL1: string;
  statsLevel: string;
}

export function startApp(root: HTMLElement,
                         baseUrl: string = "http://127.0.0.1:8000"): void {
  const api = new ApiClient(baseUrl);
  const queryGate = new LatestGate();
  const state: AppState = {
    corpora: [], corpus: null, tab: "search",
    builder: emptyBuilder(), serverError: null,
    result: null, expanded: null, detail: null, pending: false,
    session: null, entry: "",
    statsResponse: null, statsDepth: 1, statsL1: "", statsLevel: "",
  };

  const redraw = () => mount(view(), root);

  async function refreshCorpora(): Promise<void> {
    state.corpora = await api.listCorpora();
    if (!state.corpus && state.corpora.length) {
      state.corpus = state.corpora[0];
    }
    redraw();
  }

  async function runSearch(offset: number): Promise<void> {
    if (!state.corpus) return;
    let structured;
    try {
      structured = buildQuery(state.builder);
    } catch {
      return; // the builder view already shows the problem
    }
    state.pending = true;
    state.serverError = null;
    redraw();
    try {
      const result = await queryGate.run(() => api.query(state.corpus!.id, {
        docFilters: structured.docFilters, slots: structured.slots,
        offset, limit: PAGE_SIZE,
      }));
      if (result === undefined) return; // a newer search superseded this one
      state.result = result;
      state.expanded = null;
      state.detail = null;
    } catch (err) {
      if (err instanceof ApiRequestError) {
        state.serverError = { message: err.body.message,
                              location: err.body.location };
      } else {
        throw err;
      }
    } finally {
      state.pending = false;
      redraw();
    }
  }

  async function expandRow(target: { textId: string;
                                     sentenceIndex: number }): Promise<void> {
    if (!state.corpus) return;
    if (state.expanded && state.expanded.textId === target.textId
        && state.expanded.sentenceIndex === target.sentenceIndex) {
      state.expanded = null;
      state.detail = null;
      redraw();
      return;
    }
    state.expanded = target;
    state.detail = await api.sentence(state.corpus.id, target.textId,
                                      target.sentenceIndex);
    redraw();
  }

  function addConstraint(key: ConstraintKey, value: string): void {
    state.builder = addConstraintToKeyword(state.builder, key, value);
    state.tab = "search";
    redraw();
    void runSearch(0);
  }

  async function startSession(): Promise<void> {
    if (!state.corpus) return;
    let structured;
    try {
      structured = buildQuery(state.builder);
    } catch {
      state.tab = "search";
      redraw();
      return;
    }
    const session = new SessionController(api, state.corpus.id);
    try {
      await session.start({
        docFilters: structured.docFilters, slots: structured.slots,
        count: 10, seed: Math.floor(Math.random() * 1_000_000),
        answerMode: "corrected", distractorPolicy: "attested-errors", k: 3,
      }, { mode: "branched", shortcutStreak: 3, skipCount: 1 });
      state.session = session;
      state.entry = "";
    } catch (err) {
      if (err instanceof ApiRequestError) {
        state.serverError = { message: err.body.message,
                              location: err.body.location };
      } else {
        throw err;
      }
    }
    redraw();
  }

  async function submitAnswer(text: string): Promise<void> {
    if (!state.session) return;
    await state.session.answer(text);
    state.entry = "";
    redraw();
  }

  async function loadStats(params: { depth: number; l1: string;
                                     level: string }): Promise<void> {
    if (!state.corpus) return;
    state.statsDepth = params.depth;
    state.statsL1 = params.l1;
    state.statsLevel = params.level;
    state.statsResponse = await api.stats(state.corpus.id, {
      depth: params.depth,
      l1: params.l1 || undefined,
      level: params.level || undefined,
    });
    redraw();
  }

  function corpusBar() {
    return h("div", { class: "corpus-bar" },
      h("select", {
        class: "corpus-picker",
        onChange: (e: Event) => {
          const id = (e.target as HTMLSelectElement).value;
          state.corpus = state.corpora.find((c) => c.id === id) ?? null;
          state.result = null;
          state.statsResponse = null;
          redraw();
        },
      }, state.corpora.map((c) => h("option", {
        value: c.id, selected: state.corpus?.id === c.id || undefined,
      }, `${c.name} (${c.textCount} textes, ${c.tokenCount} tokens)`))),
      h("label", { class: "upload" }, "charger un corpus XML",
        h("input", {
          type: "file", accept: ".xml",
          onChange: async (e: Event) => {
            const input = e.target as HTMLInputElement;
            const file = input.files?.[0];
            if (!file) return;
            try {
              const summary = await api.uploadCorpus(await file.text());
              await refreshCorpora();
              state.corpus = state.corpora.find(
                (c) => c.id === summary.id) ?? state.corpus;
            } catch (err) {
              if (err instanceof ApiRequestError) {
                state.serverError = { message: err.body.message,
                                      location: err.body.location };
              } else {
                throw err;
              }
            }
            redraw();
          },
        })));
  }

  function tabs() {
    const tab = (id: Tab, label: string) => h("button", {
      class: `tab ${state.tab === id ? "active" : ""}`, type: "button",
      onClick: () => { state.tab = id; redraw(); },
    }, label);
    return h("nav", { class: "tabs" },
      tab("search", "Recherche"),
      tab("exercises", "Exercices"),
      tab("stats", "Statistiques"));
  }

  function view() {
    let body;
    if (state.tab === "search") {
      body = h("div", { class: "search-tab" },
        renderQueryBuilder({
          builder: state.builder,
          catalog: state.corpus?.catalog ?? null,
          serverError: state.serverError,
        }, {
          onChange: (next) => { state.builder = next; redraw(); },
          onSubmit: () => void runSearch(0),
        }),
        renderConcordance({
          result: state.result, expanded: state.expanded,
          detail: state.detail, pending: state.pending,
        }, {
          onPage: (offset) => void runSearch(offset),
          onExpand: (line) => void expandRow(line),
          onAddConstraint: addConstraint,
        }));
    } else if (state.tab === "exercises") {
      body = h("div", { class: "exercises-tab" },
        state.session ? null : h("button", {
          class: "start-session", type: "button",
          onClick: () => void startSession(),
        }, "Démarrer une série (requête courante)"),
        renderSession({
          current: state.session?.current ?? null,
          lastFeedback: state.session?.lastFeedback ?? null,
          report: state.session?.report ?? null,
          entry: state.entry,
          onEntryChange: (text) => { state.entry = text; redraw(); },
        }, {
          onAnswer: (text) => void submitAnswer(text),
          onRestart: () => { state.session = null; redraw(); },
        }));
    } else {
      body = renderStats({
        catalog: state.corpus?.catalog ?? null,
        response: state.statsResponse,
        depth: state.statsDepth, l1: state.statsL1, level: state.statsLevel,
      }, { onFilter: (params) => void loadStats(params) });
    }
    return h("div", { class: "app" }, corpusBar(), tabs(), body);
  }

  redraw();
  void refreshCorpora();
}
