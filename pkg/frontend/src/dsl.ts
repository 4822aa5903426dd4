/** Render a structured query as DSL text, matching the server's own
 * normalization so the displayed string re-parses to the same query. */

import { Quantifier, StructuredQuery } from "./types.js";

function quote(value: string): string {
  return '"' + value.replace(/\\/g, "\\\\").replace(/"/g, '\\"') + '"';
}

function quantSuffix(q: Quantifier): string {
  if (q.kind === "optional" || (q.min === 0 && q.max === 1)) return "?";
  if (q.kind === "star" || (q.min === 0 && q.max === null)) return "*";
  if (q.kind === "one" || (q.min === 1 && q.max === 1)) return "";
  return `{${q.min},${q.max}}`;
}

export function toDsl(query: StructuredQuery): string {
  const parts: string[] = [];
  for (const v of [...(query.docFilters.l1 ?? [])].sort()) {
    parts.push(`@l1=${quote(v)}`);
  }
  for (const v of [...(query.docFilters.level ?? [])].sort()) {
    parts.push(`@level=${quote(v)}`);
  }
  for (const slot of query.slots) {
    const conj = slot.constraints
      .map((c) => `${c.key}${c.op === "eq" ? "=" : "!="}${quote(c.value)}`)
      .join(" & ");
    parts.push(`${slot.keyword ? "!" : ""}[${conj}]${quantSuffix(slot.quantifier)}`);
  }
  return parts.join(" ");
}
