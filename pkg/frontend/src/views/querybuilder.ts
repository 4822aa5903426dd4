/** The search form: left-context slots, the keyword slot, right-context
 * slots, document filters, and a live DSL echo of the current form. */

import { BuilderError, BuilderSlot, BuilderState, Zone, buildQuery,
         suggestionsFor } from "../builder.js";
import { toDsl } from "../dsl.js";
import { Catalog, CONSTRAINT_KEYS } from "../types.js";
import { VNode, h } from "../vdom.js";

export interface BuilderCallbacks {
  onChange(next: BuilderState): void;
  onSubmit(): void;
}

export interface BuilderViewState {
  builder: BuilderState;
  catalog: Catalog | null;
  serverError: { message: string; location: string | null } | null;
}

function datalistId(key: string): string {
  return `options-${key}`;
}

function constraintRow(state: BuilderState, zone: Zone, slotIndex: number,
                       rowIndex: number, cb: BuilderCallbacks): VNode {
  const slot = zoneSlots(state, zone)[slotIndex];
  const row = slot.rows[rowIndex];
  const update = (patch: Partial<typeof row>) => {
    const next = structuredClone(state);
    Object.assign(zoneSlots(next, zone)[slotIndex].rows[rowIndex], patch);
    cb.onChange(next);
  };
  const remove = () => {
    const next = structuredClone(state);
    zoneSlots(next, zone)[slotIndex].rows.splice(rowIndex, 1);
    cb.onChange(next);
  };
  return h("div", { class: "constraint-row" },
    h("select", {
      class: "key", value: row.key,
      onChange: (e: Event) =>
        update({ key: (e.target as HTMLSelectElement).value as never }),
    }, CONSTRAINT_KEYS.map((k) =>
      h("option", { value: k, selected: k === row.key || undefined }, k))),
    h("select", {
      class: "op", value: row.op,
      onChange: (e: Event) =>
        update({ op: (e.target as HTMLSelectElement).value as "eq" | "neq" }),
    },
      h("option", { value: "eq", selected: row.op === "eq" || undefined }, "="),
      h("option", { value: "neq", selected: row.op === "neq" || undefined }, "≠")),
    h("input", {
      class: "value", type: "text", value: row.value,
      list: datalistId(row.key), placeholder: "valeur",
      onInput: (e: Event) =>
        update({ value: (e.target as HTMLInputElement).value }),
    }),
    slot.rows.length > 1
      ? h("button", { class: "remove-row", type: "button", onClick: remove }, "×")
      : null);
}

function zoneSlots(state: BuilderState, zone: Zone): BuilderSlot[] {
  if (zone === "left") return state.left;
  if (zone === "right") return state.right;
  return [state.keyword];
}

function slotCard(state: BuilderState, zone: Zone, slotIndex: number,
                  cb: BuilderCallbacks): VNode {
  const slot = zoneSlots(state, zone)[slotIndex];
  const addRow = () => {
    const next = structuredClone(state);
    zoneSlots(next, zone)[slotIndex].rows.push(
      { key: "lemma", op: "eq", value: "" });
    cb.onChange(next);
  };
  const removeSlot = () => {
    const next = structuredClone(state);
    zoneSlots(next, zone).splice(slotIndex, 1);
    cb.onChange(next);
  };
  const setQuantifier = (value: string) => {
    const next = structuredClone(state);
    const target = zoneSlots(next, zone)[slotIndex];
    if (value === "range") {
      target.quantifier = "range";
    } else {
      target.quantifier = value as BuilderSlot["quantifier"];
    }
    cb.onChange(next);
  };
  const quantifier = zone === "keyword" ? null : h("div", { class: "quantifier" },
    h("select", {
      value: slot.quantifier,
      onChange: (e: Event) =>
        setQuantifier((e.target as HTMLSelectElement).value),
    },
      h("option", { value: "one", selected: slot.quantifier === "one" || undefined }, "exactement un"),
      h("option", { value: "optional", selected: slot.quantifier === "optional" || undefined }, "optionnel (?)"),
      h("option", { value: "star", selected: slot.quantifier === "star" || undefined }, "zéro ou plus (*)"),
      h("option", { value: "range", selected: slot.quantifier === "range" || undefined }, "intervalle {m,n}")),
    slot.quantifier === "range" ? h("span", { class: "range-bounds" },
      h("input", {
        type: "number", class: "range-min", value: slot.rangeMin, min: 0,
        onInput: (e: Event) => {
          const next = structuredClone(state);
          zoneSlots(next, zone)[slotIndex].rangeMin =
            Number((e.target as HTMLInputElement).value);
          cb.onChange(next);
        },
      }),
      h("input", {
        type: "number", class: "range-max", value: slot.rangeMax, min: 0,
        onInput: (e: Event) => {
          const next = structuredClone(state);
          zoneSlots(next, zone)[slotIndex].rangeMax =
            Number((e.target as HTMLInputElement).value);
          cb.onChange(next);
        },
      })) : null);
  return h("div", { class: `slot ${zone === "keyword" ? "keyword-slot" : ""}` },
    slot.rows.map((_row, i) => constraintRow(state, zone, slotIndex, i, cb)),
    h("button", { class: "add-row", type: "button", onClick: addRow },
      "+ critère"),
    quantifier,
    zone === "keyword" ? null
      : h("button", { class: "remove-slot", type: "button",
                      onClick: removeSlot }, "supprimer"));
}

function zoneColumn(state: BuilderState, zone: Zone, title: string,
                    cb: BuilderCallbacks): VNode {
  const slots = zoneSlots(state, zone);
  const addSlot = () => {
    const next = structuredClone(state);
    const list = zone === "left" ? next.left : next.right;
    list.push({ rows: [{ key: "lemma", op: "eq", value: "" }],
                quantifier: "one", rangeMin: 0, rangeMax: 1 });
    cb.onChange(next);
  };
  return h("div", { class: `zone zone-${zone}` },
    h("h3", {}, title),
    slots.map((_s, i) => slotCard(state, zone, i, cb)),
    zone === "keyword" ? null
      : h("button", { class: "add-slot", type: "button", onClick: addSlot },
          "+ position"));
}

function docFilters(state: BuilderViewState, cb: BuilderCallbacks): VNode {
  const toggle = (kind: "l1" | "level", value: string) => {
    const next = structuredClone(state.builder);
    const list = next[kind];
    const at = list.indexOf(value);
    if (at >= 0) list.splice(at, 1); else list.push(value);
    cb.onChange(next);
  };
  const group = (kind: "l1" | "level", values: string[], label: string) =>
    h("fieldset", { class: `docfilter docfilter-${kind}` },
      h("legend", {}, label),
      values.map((v) => h("label", {},
        h("input", {
          type: "checkbox", value: v,
          checked: state.builder[kind].includes(v) || undefined,
          onChange: () => toggle(kind, v),
        }), v)));
  return h("div", { class: "docfilters" },
    group("l1", state.catalog?.l1 ?? [], "Langue maternelle"),
    group("level", state.catalog?.levels ?? [], "Niveau"));
}

/** Current DSL text, or the validation problem that prevents building. */
export function livePreview(state: BuilderState):
    { dsl: string | null; problem: string | null } {
  try {
    return { dsl: toDsl(buildQuery(state)), problem: null };
  } catch (err) {
    if (err instanceof BuilderError) {
      return { dsl: null, problem: err.message };
    }
    throw err;
  }
}

export function renderQueryBuilder(state: BuilderViewState,
                                   cb: BuilderCallbacks): VNode {
  const preview = livePreview(state.builder);
  const datalists = CONSTRAINT_KEYS.map((key) =>
    h("datalist", { id: datalistId(key) },
      (state.catalog ? suggestionsFor(key, state.catalog) : []).map(
        (v) => h("option", { value: v }))));
  return h("form", {
    class: "query-builder",
    onSubmit: (e: Event) => { e.preventDefault(); cb.onSubmit(); },
  },
    docFilters(state, cb),
    h("div", { class: "zones" },
      zoneColumn(state.builder, "left", "Contexte gauche", cb),
      zoneColumn(state.builder, "keyword", "Mot-clé", cb),
      zoneColumn(state.builder, "right", "Contexte droit", cb)),
    h("div", { class: "dsl-preview" },
      preview.dsl !== null
        ? h("code", { class: "dsl" }, preview.dsl)
        : h("span", { class: "form-problem" }, preview.problem ?? "")),
    state.serverError
      ? h("div", { class: "server-error" },
          state.serverError.location
            ? `${state.serverError.message} (${state.serverError.location})`
            : state.serverError.message)
      : null,
    h("button", {
      type: "submit", class: "submit",
      disabled: preview.dsl === null || undefined,
    }, "Rechercher"),
    datalists);
}
