// Builder state: the widget-side mirror of the wire filter language.
// Conditions hold their operands as input text; conversion to the wire
// format applies the field's type (Integer operands become numbers).

import type { SchemaField, WireNode } from "./api.js";
import { OPERATORS_BY_TYPE, operatorArity } from "./operators.js";

export interface ConditionState {
  kind: "condition";
  field: string; // source or display name
  op: string;
  args: string[];
}

export interface GroupState {
  kind: "group";
  combinator: "and" | "or";
  children: BuilderNode[];
}

export type BuilderNode = ConditionState | GroupState;

export class SchemaIndex {
  private byName = new Map<string, SchemaField>();

  constructor(public fields: SchemaField[]) {
    for (const field of fields) {
      this.byName.set(field.name, field);
      this.byName.set(field.display_name, field);
    }
  }

  field(name: string): SchemaField {
    const found = this.byName.get(name);
    if (!found) throw new Error(`unknown field: ${name}`);
    return found;
  }

  allowedOperators(name: string): readonly string[] {
    return OPERATORS_BY_TYPE[this.field(name).type];
  }
}

export function emptyBuilder(): GroupState {
  return { kind: "group", combinator: "and", children: [] };
}

export function defaultCondition(index: SchemaIndex): ConditionState {
  const first = index.fields.find((f) => f.highlighted) ?? index.fields[0];
  if (!first) throw new Error("schema has no fields");
  return { kind: "condition", field: first.display_name, op: "equal", args: [""] };
}

function toWireArgs(condition: ConditionState, index: SchemaIndex): (string | number)[] {
  const type = index.field(condition.field).type;
  if (type !== "Integer") return [...condition.args];
  return condition.args.map((text) => {
    const value = Number.parseInt(text.trim(), 10);
    if (!Number.isSafeInteger(value)) throw new Error(`not an integer: "${text}"`);
    return value;
  });
}

export function toWire(node: BuilderNode, index: SchemaIndex): WireNode {
  if (node.kind === "condition") {
    return { field: node.field, op: node.op, args: toWireArgs(node, index) };
  }
  const children = node.children.map((child) => toWire(child, index));
  if (children.length === 0) throw new Error("empty group");
  return node.combinator === "and" ? { and: children } : { or: children };
}

export function fromWire(node: WireNode, index: SchemaIndex): BuilderNode {
  if ("and" in node || "or" in node) {
    const combinator = "and" in node ? "and" : "or";
    const children = ("and" in node ? node.and : node.or).map((child) =>
      fromWire(child, index),
    );
    return { kind: "group", combinator, children };
  }
  index.field(node.field); // fail early on unknown names
  return {
    kind: "condition",
    field: node.field,
    op: node.op,
    args: node.args.map((a) => String(a)),
  };
}

type Canon =
  | { f: string; op: string; args: (string | number)[] }
  | { g: "and" | "or"; ch: Canon[] };

function canonical(node: BuilderNode, index: SchemaIndex): Canon {
  if (node.kind === "condition") {
    return {
      f: index.field(node.field).name,
      op: node.op,
      args: toWireArgs(node, index),
    };
  }
  return { g: node.combinator, ch: node.children.map((c) => canonical(c, index)) };
}

/** True when two builder states serialize to the same query. */
export function equivalent(a: BuilderNode, b: BuilderNode, index: SchemaIndex): boolean {
  return JSON.stringify(canonical(a, index)) === JSON.stringify(canonical(b, index));
}

// Deterministic RNG so test failures reproduce.
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const WORDS = ["Nord", "Stad", "Office", "Canal", "Mairie", "Depot", "Ankara", "Ville"];

function pick<T>(rng: () => number, items: readonly T[]): T {
  const item = items[Math.floor(rng() * items.length)];
  if (item === undefined) throw new Error("pick from empty list");
  return item;
}

function randomOperand(rng: () => number, field: SchemaField): string {
  if (field.type === "Integer") {
    return String(Math.floor(rng() * 2_000_000) - 1000);
  }
  if (field.type === "Factor" && field.values && field.values.length > 0 && rng() < 0.8) {
    return pick(rng, field.values);
  }
  if (rng() < 0.3) {
    const year = 2006 + Math.floor(rng() * 10);
    const month = 1 + Math.floor(rng() * 12);
    const day = 1 + Math.floor(rng() * 28);
    return `${year}-${String(month).padStart(2, "0")}-${String(day).padStart(2, "0")}`;
  }
  return `${pick(rng, WORDS)} ${Math.floor(rng() * 100)}`;
}

export function randomCondition(rng: () => number, index: SchemaIndex): ConditionState {
  const field = pick(rng, index.fields);
  const op = pick(rng, OPERATORS_BY_TYPE[field.type]);
  const arity = operatorArity(op);
  let args: string[] = [];
  if (arity.kind === "one") args = [randomOperand(rng, field)];
  else if (arity.kind === "pair") args = [randomOperand(rng, field), randomOperand(rng, field)];
  else if (arity.kind === "list") {
    args = Array.from({ length: 1 + Math.floor(rng() * 3) }, () => randomOperand(rng, field));
  }
  const name = rng() < 0.5 ? field.name : field.display_name;
  return { kind: "condition", field: name, op, args };
}

/** Random builder states for the round-trip tests; depth stays small the
 * way hand-built filters do. */
export function randomState(
  rng: () => number,
  index: SchemaIndex,
  depth = 3,
): GroupState {
  const size = 1 + Math.floor(rng() * 3);
  const children: BuilderNode[] = [];
  for (let i = 0; i < size; i++) {
    if (depth > 1 && rng() < 0.3) {
      children.push(randomState(rng, index, depth - 1));
    } else {
      children.push(randomCondition(rng, index));
    }
  }
  return { kind: "group", combinator: rng() < 0.5 ? "and" : "or", children };
}
