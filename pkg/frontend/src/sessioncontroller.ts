/** Drives one practice session against the service and records what the
 * server presented, in order. Correctness decisions, remedial detours and
 * short cuts all happen server-side; this controller only relays answers. */

import { ApiClient } from "./api.js";
import {
  AnswerFeedback,
  ExerciseRequest,
  GapFillItem,
  SessionConfig,
  SessionReport,
} from "./types.js";

export class SessionController {
  sessionId: string | null = null;
  current: GapFillItem | null = null;
  lastFeedback: AnswerFeedback | null = null;
  report: SessionReport | null = null;
  readonly presented: GapFillItem[] = [];

  constructor(private readonly api: ApiClient,
              private readonly corpusId: string) {}

  get finished(): boolean {
    return this.report !== null;
  }

  async start(exerciseRequest: ExerciseRequest,
              config: SessionConfig): Promise<GapFillItem> {
    const created = await this.api.createSession(
      this.corpusId, exerciseRequest, config);
    this.sessionId = created.sessionId;
    this.current = created.firstItem;
    this.presented.push(created.firstItem);
    return created.firstItem;
  }

  async answer(text: string): Promise<AnswerFeedback> {
    if (this.sessionId === null) throw new Error("session not started");
    const feedback = await this.api.answer(this.sessionId, text);
    this.lastFeedback = feedback;
    if (feedback.finished) {
      this.current = null;
      this.report = feedback.report;
    } else if (feedback.nextItem) {
      this.current = feedback.nextItem;
      this.presented.push(feedback.nextItem);
    }
    return feedback;
  }

  presentedSources(): [string, number, number][] {
    return this.presented.map((item) => [
      item.source.textId, item.source.sentenceIndex, item.source.tokenIndex]);
  }
}
