/** Wire types mirroring the service's JSON contracts. */

export interface Catalog {
  pos: string[];
  traits: string[];
  categories: string[];
  l1: string[];
  levels: string[];
}

export interface CorpusSummary {
  id: string;
  name: string;
  textCount: number;
  tokenCount: number;
  catalog: Catalog;
}

export type ConstraintKey =
  | "surface" | "lemma" | "pos" | "trait" | "error" | "cat" | "corr";

export const CONSTRAINT_KEYS: ConstraintKey[] =
  ["surface", "lemma", "pos", "trait", "error", "cat", "corr"];

export interface Constraint {
  key: ConstraintKey;
  op: "eq" | "neq";
  value: string;
}

export interface Quantifier {
  kind: "one" | "optional" | "star" | "range";
  min: number;
  max: number | null;
}

export interface QuerySlot {
  constraints: Constraint[];
  quantifier: Quantifier;
  keyword: boolean;
}

export interface StructuredQuery {
  docFilters: { l1: string[] | null; level: string[] | null };
  slots: QuerySlot[];
}

export interface ConcordanceLine {
  no: number;
  textId: string;
  left: string;
  keyword: string;
  right: string;
  sentenceIndex: number;
  tokenIndex: number;
  matchStart: number;
  matchEnd: number;
}

export interface QueryResponse {
  total: number;
  offset: number;
  limit: number;
  query: StructuredQuery;
  dsl: string;
  lines: ConcordanceLine[];
}

export interface ItemSource {
  textId: string;
  sentenceIndex: number;
  tokenIndex: number;
}

export interface GapFillItem {
  stem: string;
  answer: string;
  distractors: string[];
  source: ItemSource;
  answerMode: string;
}

export interface ExerciseSet {
  generator: string;
  seed: number;
  answerMode: string;
  distractorPolicy: string;
  distractorCount: number;
  noExamples: boolean;
  query: StructuredQuery;
  dsl: string;
  items: GapFillItem[];
}

export interface ExerciseRequest {
  dsl?: string;
  docFilters?: StructuredQuery["docFilters"];
  slots?: QuerySlot[];
  count: number;
  seed: number;
  answerMode?: string;
  distractorPolicy?: string;
  k?: number;
}

export interface SessionConfig {
  mode: "linear" | "branched";
  shortcutStreak?: number;
  skipCount?: number;
  errorRateThreshold?: number;
  caseSensitive?: boolean;
}

export interface SessionCreated {
  sessionId: string;
  firstItem: GapFillItem;
  itemCount: number;
}

export interface SessionReport {
  totalResponses: number;
  errorCount: number;
  errorRate: number;
  thresholdExceeded: boolean;
  history: {
    source: [string, number, number];
    answer: string;
    correct: boolean;
    remedial: boolean;
    timestamp: number;
  }[];
}

export interface AnswerFeedback {
  correct: boolean;
  finished: boolean;
  nextItem: GapFillItem | null;
  report: SessionReport | null;
}

export interface StatsRow {
  category: string;
  count: number;
  relativeFrequency: number;
}

export interface StatsResponse {
  depth: number;
  l1: string | null;
  level: string | null;
  minCount: number;
  totalSpans: number;
  totalTokens: number;
  rows: StatsRow[];
}

export interface SentenceDetail {
  textId: string;
  sentenceIndex: number;
  l1: string;
  level: string;
  tokens: {
    tokenIndex: number;
    surface: string;
    lemma: string;
    pos: string;
    traits: string[];
  }[];
  spans: {
    category: string;
    firstToken: number;
    lastToken: number;
    correctedForm: string;
  }[];
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
  location: string | null;
}
