/** Just enough virtual DOM: views build plain trees, the app renders them.
 * Tests inspect the trees directly and need no browser environment. */

export type Props = Record<string, unknown>;

export interface VNode {
  tag: string;
  props: Props;
  children: Child[];
}

export type Child = VNode | string;

export function h(tag: string, props: Props = {}, ...children: (Child | Child[] | null | undefined)[]): VNode {
  const flat: Child[] = [];
  const push = (c: Child | Child[] | null | undefined) => {
    if (c === null || c === undefined) return;
    if (Array.isArray(c)) { c.forEach(push); return; }
    flat.push(c);
  };
  children.forEach(push);
  return { tag, props, children: flat };
}

export function render(node: Child, parent: HTMLElement): void {
  if (typeof node === "string") {
    parent.appendChild(document.createTextNode(node));
    return;
  }
  const el = document.createElement(node.tag);
  for (const [name, value] of Object.entries(node.props)) {
    if (value === undefined || value === null || value === false) continue;
    if (name.startsWith("on") && typeof value === "function") {
      el.addEventListener(name.slice(2).toLowerCase(),
                          value as EventListener);
    } else if (name === "value" && el instanceof HTMLInputElement) {
      el.value = String(value);
    } else if (value === true) {
      el.setAttribute(name, "");
    } else {
      el.setAttribute(name, String(value));
    }
  }
  for (const child of node.children) render(child, el);
  parent.appendChild(el);
}

export function mount(node: Child, parent: HTMLElement): void {
  parent.replaceChildren();
  render(node, parent);
}

// -- tree helpers used by both the app and the tests ------------------------

export function textOf(node: Child): string {
  if (typeof node === "string") return node;
  return node.children.map(textOf).join(" ").replace(/\s+/g, " ").trim();
}

export function findAll(node: Child,
                        predicate: (n: VNode) => boolean): VNode[] {
  if (typeof node === "string") return [];
  const here = predicate(node) ? [node] : [];
  return here.concat(...node.children.map((c) => findAll(c, predicate)));
}

export function byTag(node: Child, tag: string): VNode[] {
  return findAll(node, (n) => n.tag === tag);
}

export function byClass(node: Child, className: string): VNode[] {
  return findAll(node, (n) =>
    typeof n.props.class === "string"
    && (n.props.class as string).split(/\s+/).includes(className));
}
