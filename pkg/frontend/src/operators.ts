// Operator metadata per field type. The server is the authority; the
// round-trip tests prove these lists never offer anything it rejects.

export type DataType = "String" | "Factor" | "Integer";

export const OPERATORS_BY_TYPE: Record<DataType, readonly string[]> = {
  String: [
    "equal", "not_equal", "less", "less_or_equal", "greater",
    "greater_or_equal", "between", "in", "not_in", "begins_with",
    "ends_with", "is_null", "is_not_null",
  ],
  Factor: ["equal", "not_equal", "is_null", "is_not_null"],
  Integer: [
    "equal", "not_equal", "less", "less_or_equal", "greater",
    "greater_or_equal", "between", "in", "not_in", "is_null", "is_not_null",
  ],
};

export const OPERATOR_LABELS: Record<string, string> = {
  equal: "equals",
  not_equal: "does not equal",
  less: "is less than",
  less_or_equal: "is at most",
  greater: "is greater than",
  greater_or_equal: "is at least",
  between: "is between",
  in: "is one of",
  not_in: "is none of",
  begins_with: "begins with",
  ends_with: "ends with",
  is_null: "is empty",
  is_not_null: "is not empty",
};

export type Arity = { kind: "none" } | { kind: "pair" } | { kind: "list" } | { kind: "one" };

export function operatorArity(op: string): Arity {
  if (op === "is_null" || op === "is_not_null") return { kind: "none" };
  if (op === "between") return { kind: "pair" };
  if (op === "in" || op === "not_in") return { kind: "list" };
  return { kind: "one" };
}
