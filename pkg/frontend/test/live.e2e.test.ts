/** End-to-end against the real service: spawns `lexix serve`, uploads the
 * bundled sample corpus, and drives the client exactly as the views do.
 * Skipped when the Python package is not available on this machine. */

import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { buildQuery, emptyBuilder } from "../src/builder.js";
import { toDsl } from "../src/dsl.js";
import { SessionController } from "../src/sessioncontroller.js";
import { CorpusSummary } from "../src/types.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

function pythonAvailable(): boolean {
  const probe = spawnSync("python3", ["-c", "import lexix"], { timeout: 20000 });
  return probe.status === 0;
}

const available = pythonAvailable();
const suite = available ? describe : describe.skip;

function referenceStructured() {
  const state = emptyBuilder();
  state.left = [{ rows: [{ key: "lemma", op: "eq", value: "avoir" }],
                  quantifier: "one", rangeMin: 0, rangeMax: 1 }];
  state.keyword.rows = [
    { key: "pos", op: "eq", value: "verbe" },
    { key: "trait", op: "eq", value: "participe passé" },
    { key: "error", op: "eq", value: "yes" },
  ];
  return buildQuery(state);
}

suite("live service round trip", () => {
  let server: ChildProcess;
  let api: ApiClient;
  let corpus: CorpusSummary;

  beforeAll(async () => {
    server = spawn("python3", ["-m", "lexix.cli", "serve",
                               "--listen", `127.0.0.1:${PORT}`],
                   { stdio: "ignore" });
    api = new ApiClient(BASE);
    const samplePath = spawnSync(
      "python3", ["-c", "import lexix; print(lexix.sample_corpus_path())"],
      { encoding: "utf-8" }).stdout.trim();
    const xml = readFileSync(samplePath, "utf-8");
    let lastError: unknown = null;
    for (let attempt = 0; attempt < 50; attempt++) {
      try {
        corpus = await api.uploadCorpus(xml);
        return;
      } catch (err) {
        lastError = err;
        await new Promise((resolve) => setTimeout(resolve, 200));
      }
    }
    throw lastError;
  }, 30000);

  afterAll(() => {
    server?.kill();
  });

  it("runs the reference query built by the form and gets the 12 rows", async () => {
    const structured = referenceStructured();
    const response = await api.query(corpus.id, {
      docFilters: structured.docFilters, slots: structured.slots, limit: 50,
    });
    expect(response.total).toBe(12);
    expect(response.lines.map((l) => l.keyword)).toEqual([
      "connais", "reçu", "traduis", "choisi", "choisi", "reussi",
      "effectué", "interviewé", "realisé", "redigé", "été", "tres"]);
    expect(response.lines.map((l) => l.textId)).toEqual([
      "2180", "2212", "2216", "2229", "2230", "2230", "2234", "2234",
      "2239", "2245", "2252", "2266"]);
  });

  it("round-trips the displayed DSL through server normalization", async () => {
    const structured = referenceStructured();
    const viaDsl = await api.query(corpus.id, { dsl: toDsl(structured) });
    expect(viaDsl.query).toEqual(structured);
    expect(viaDsl.dsl).toBe(toDsl(structured));
  });

  it("drives a branched session in the engine's presentation order", async () => {
    const exerciseRequest = {
      dsl: '![pos="nom"]', count: 10, seed: 314,
      answerMode: "as-written" as const, distractorPolicy: "none", k: 0,
    };
    // The deterministic exercise set tells us the session's item list.
    const expectedSet = await api.exercises(corpus.id, exerciseRequest);
    expect(expectedSet.items).toHaveLength(10);

    const session = new SessionController(api, corpus.id);
    await session.start(exerciseRequest,
                        { mode: "branched", shortcutStreak: 3, skipCount: 1 });
    while (!session.finished) {
      await session.answer(session.current!.answer);
    }
    // All correct with streak 3 / skip 1: items 4 and 8 are skipped.
    const expectedOrder = [0, 1, 2, 4, 5, 6, 8, 9].map((i) => {
      const source = expectedSet.items[i].source;
      return [source.textId, source.sentenceIndex, source.tokenIndex];
    });
    expect(session.presentedSources()).toEqual(expectedOrder);
    expect(session.report?.errorCount).toBe(0);
    expect(session.report?.thresholdExceeded).toBe(false);
  });

  it("detours to a remedial item and returns after a failure", async () => {
    const session = new SessionController(api, corpus.id);
    const first = await session.start(
      { dsl: '![pos="nom"]', count: 3, seed: 7 }, { mode: "branched" });
    const feedback = await session.answer("franchement-faux");
    expect(feedback.correct).toBe(false);
    expect(feedback.nextItem).not.toBeNull();
    await session.answer(session.current!.answer); // answer the remedial
    const sources = session.presentedSources();
    expect(sources[2]).toEqual(sources[0]); // back to the failed item
    expect(session.current?.source).toEqual(first.source);
  });

  it("surfaces server-side query errors with their location", async () => {
    await expect(api.query(corpus.id, { dsl: '![lemma="avoir"' }))
      .rejects.toMatchObject({ body: { code: "query_syntax" } });
    await expect(api.query(corpus.id, { dsl: '![flavour="sweet"]' }))
      .rejects.toMatchObject({ body: { code: "query_invalid" } });
  });
});

if (!available) {
  it("live suite skipped: python lexix not importable", () => {
    expect(available).toBe(false);
  });
}
