/** Query-builder model: left-context slots, one keyword slot, right-context
 * slots. Emits the structured JSON the service accepts; the server remains
 * the only interpreter of query semantics. */

import {
  Constraint,
  ConstraintKey,
  Quantifier,
  QuerySlot,
  StructuredQuery,
} from "./types.js";

export interface ConstraintRow {
  key: ConstraintKey;
  op: "eq" | "neq";
  value: string;
}

export type QuantifierChoice = "one" | "optional" | "star" | "range";

export interface BuilderSlot {
  rows: ConstraintRow[];
  quantifier: QuantifierChoice;
  rangeMin: number;
  rangeMax: number;
}

export type Zone = "left" | "keyword" | "right";

export class BuilderError extends Error {
  constructor(message: string, public readonly zone?: Zone,
              public readonly slotIndex?: number) {
    super(message);
  }
}

export function emptySlot(): BuilderSlot {
  return { rows: [{ key: "lemma", op: "eq", value: "" }],
           quantifier: "one", rangeMin: 0, rangeMax: 1 };
}

export interface BuilderState {
  left: BuilderSlot[];
  keyword: BuilderSlot;
  right: BuilderSlot[];
  l1: string[];
  level: string[];
}

export function emptyBuilder(): BuilderState {
  return { left: [], keyword: emptySlot(), right: [], l1: [], level: [] };
}

function toQuantifier(slot: BuilderSlot): Quantifier {
  switch (slot.quantifier) {
    case "one": return { kind: "one", min: 1, max: 1 };
    case "optional": return { kind: "optional", min: 0, max: 1 };
    case "star": return { kind: "star", min: 0, max: null };
    case "range":
      return { kind: "range", min: slot.rangeMin, max: slot.rangeMax };
  }
}

function effectiveRows(slot: BuilderSlot): Constraint[] {
  return slot.rows
    .filter((row) => row.value.trim() !== "")
    .map((row) => ({ key: row.key, op: row.op, value: row.value.trim() }));
}

function buildSlot(slot: BuilderSlot, zone: Zone, index: number,
                   keyword: boolean): QuerySlot {
  const constraints = effectiveRows(slot);
  if (constraints.length === 0) {
    throw new BuilderError(
      keyword ? "keyword slot required"
              : "context slot needs at least one filled constraint",
      zone, index);
  }
  for (const c of constraints) {
    if (c.key === "error" && !["yes", "no"].includes(c.value.toLowerCase())) {
      throw new BuilderError('error takes "yes" or "no"', zone, index);
    }
  }
  if (slot.quantifier === "range"
      && (slot.rangeMin < 0 || slot.rangeMax < slot.rangeMin)) {
    throw new BuilderError("range needs 0 <= min <= max", zone, index);
  }
  return {
    constraints,
    quantifier: keyword ? { kind: "one", min: 1, max: 1 } : toQuantifier(slot),
    keyword,
  };
}

/** The structured query for the current form state; throws BuilderError
 * with the offending zone when the form is not submittable. */
export function buildQuery(state: BuilderState): StructuredQuery {
  const slots: QuerySlot[] = [];
  state.left.forEach((slot, i) => slots.push(buildSlot(slot, "left", i, false)));
  slots.push(buildSlot(state.keyword, "keyword", 0, true));
  state.right.forEach((slot, i) => slots.push(buildSlot(slot, "right", i, false)));
  return {
    docFilters: {
      l1: state.l1.length ? [...state.l1].sort() : null,
      level: state.level.length ? [...state.level].sort() : null,
    },
    slots,
  };
}

/** Append a constraint clicked in the results view (exploration loop). */
export function addConstraintToKeyword(state: BuilderState,
                                       key: ConstraintKey,
                                       value: string): BuilderState {
  const keyword = {
    ...state.keyword,
    rows: [...state.keyword.rows.filter((r) => r.value.trim() !== ""),
           { key, op: "eq" as const, value }],
  };
  return { ...state, keyword };
}

/** Datalist options for a constraint key, drawn from the corpus catalog. */
export function suggestionsFor(key: ConstraintKey, catalog: {
  pos: string[]; traits: string[]; categories: string[];
}): string[] {
  switch (key) {
    case "pos": return catalog.pos;
    case "trait": return catalog.traits;
    case "cat": return catalog.categories;
    case "error": return ["yes", "no"];
    default: return [];
  }
}
