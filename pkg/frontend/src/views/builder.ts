// Filter builder: nested groups of typed conditions. The operator
// dropdown for a field offers exactly the operators its type allows, and
// Factor fields get the server's choice list instead of free text.

import {
  BuilderNode,
  ConditionState,
  GroupState,
  SchemaIndex,
  defaultCondition,
} from "../filterModel.js";
import { OPERATOR_LABELS, operatorArity } from "../operators.js";

export interface BuilderCallbacks {
  onChange: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, onClick: () => void, className = "btn"): HTMLButtonElement {
  const node = el("button", className, label);
  node.type = "button";
  node.addEventListener("click", onClick);
  return node;
}

function operandInputs(
  condition: ConditionState,
  index: SchemaIndex,
  notify: () => void,
): HTMLElement {
  const wrap = el("span", "operands");
  const field = index.field(condition.field);
  const arity = operatorArity(condition.op);
  if (arity.kind === "none") return wrap;

  const count = arity.kind === "pair" ? 2 : 1;
  if (arity.kind === "list") {
    const input = el("input");
    input.placeholder = "comma separated values";
    input.value = condition.args.join(", ");
    input.addEventListener("change", () => {
      condition.args = input.value
        .split(",")
        .map((part) => part.trim())
        .filter((part) => part.length > 0);
      notify();
    });
    wrap.append(input);
    return wrap;
  }

  for (let i = 0; i < count; i++) {
    if (field.type === "Factor" && field.values) {
      const select = el("select");
      for (const value of field.values) {
        const option = el("option", undefined, value);
        option.value = value;
        select.append(option);
      }
      if (condition.args[i]) select.value = condition.args[i] ?? "";
      else condition.args[i] = field.values[0] ?? "";
      select.addEventListener("change", () => {
        condition.args[i] = select.value;
        notify();
      });
      wrap.append(select);
    } else {
      const input = el("input");
      input.type = field.type === "Integer" ? "number" : "text";
      input.value = condition.args[i] ?? "";
      input.addEventListener("change", () => {
        condition.args[i] = input.value;
        notify();
      });
      wrap.append(input);
    }
    if (arity.kind === "pair" && i === 0) wrap.append(el("span", "and-sep", "and"));
  }
  return wrap;
}

function conditionArgsFor(op: string, previous: string[]): string[] {
  const arity = operatorArity(op);
  if (arity.kind === "none") return [];
  if (arity.kind === "pair") return [previous[0] ?? "", previous[1] ?? ""];
  if (arity.kind === "list") return previous.length ? previous : [];
  return [previous[0] ?? ""];
}

function renderCondition(
  condition: ConditionState,
  index: SchemaIndex,
  remove: () => void,
  callbacks: BuilderCallbacks,
): HTMLElement {
  const row = el("div", "condition");

  const fieldSelect = el("select", "field-select");
  for (const field of index.fields) {
    const option = el("option", undefined, field.display_name);
    option.value = field.display_name;
    if (field.highlighted) option.classList.add("highlighted");
    fieldSelect.append(option);
  }
  fieldSelect.value = index.field(condition.field).display_name;

  const opSelect = el("select", "op-select");
  const fillOperators = () => {
    opSelect.textContent = "";
    for (const op of index.allowedOperators(condition.field)) {
      const option = el("option", undefined, OPERATOR_LABELS[op] ?? op);
      option.value = op;
      opSelect.append(option);
    }
    opSelect.value = condition.op;
  };
  fillOperators();

  let operands = operandInputs(condition, index, callbacks.onChange);

  const refreshOperands = () => {
    const next = operandInputs(condition, index, callbacks.onChange);
    operands.replaceWith(next);
    operands = next;
  };

  fieldSelect.addEventListener("change", () => {
    condition.field = fieldSelect.value;
    const allowed = index.allowedOperators(condition.field);
    if (!allowed.includes(condition.op)) condition.op = allowed[0] ?? "equal";
    condition.args = conditionArgsFor(condition.op, []);
    fillOperators();
    refreshOperands();
    callbacks.onChange();
  });

  opSelect.addEventListener("change", () => {
    condition.op = opSelect.value;
    condition.args = conditionArgsFor(condition.op, condition.args);
    refreshOperands();
    callbacks.onChange();
  });

  row.append(
    fieldSelect,
    opSelect,
    operands,
    button("×", remove, "btn remove"),
  );
  return row;
}

export function renderGroup(
  group: GroupState,
  index: SchemaIndex,
  callbacks: BuilderCallbacks,
  remove?: () => void,
): HTMLElement {
  const box = el("div", "group");
  const header = el("div", "group-header");

  const combinator = el("select", "combinator");
  for (const [value, label] of [["and", "ALL of"], ["or", "ANY of"]] as const) {
    const option = el("option", undefined, label);
    option.value = value;
    combinator.append(option);
  }
  combinator.value = group.combinator;
  combinator.addEventListener("change", () => {
    group.combinator = combinator.value === "or" ? "or" : "and";
    callbacks.onChange();
  });
  header.append(combinator);

  const children = el("div", "group-children");
  const rerenderChildren = () => {
    children.textContent = "";
    group.children.forEach((child, position) => {
      const removeChild = () => {
        group.children.splice(position, 1);
        rerenderChildren();
        callbacks.onChange();
      };
      if (child.kind === "condition") {
        children.append(renderCondition(child, index, removeChild, callbacks));
      } else {
        children.append(renderGroup(child, index, callbacks, removeChild));
      }
    });
  };
  rerenderChildren();

  header.append(
    button("+ condition", () => {
      group.children.push(defaultCondition(index));
      rerenderChildren();
      callbacks.onChange();
    }),
    button("+ group", () => {
      group.children.push({
        kind: "group",
        combinator: "and",
        children: [defaultCondition(index)],
      } as BuilderNode);
      rerenderChildren();
      callbacks.onChange();
    }),
  );
  if (remove) header.append(button("×", remove, "btn remove"));

  box.append(header, children);
  return box;
}
