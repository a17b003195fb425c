"""Typed filter expressions: parse, validate, evaluate, page, export.

Wire grammar (JSON): a node is one of
    {"and": [node, ...]}
    {"or": [node, ...]}
    {"field": name, "op": operator, "args": [literal, ...]}

Fields may be named by source or display name; responses always use
display names. Null cells fail every condition except is_null.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field as dc_field
from functools import cmp_to_key
from typing import Union

import numpy as np

from .ingest import make_notice_link
from .schema import (
    DataType,
    OPERATOR_ARITY,
    OPERATOR_MATRIX,
    OPERATORS,
    Schema,
)
from .store import ColumnStore, FactorColumn, IntegerColumn, StringColumn

Literal = Union[str, int]


@dataclass(frozen=True)
class Condition:
    field: str
    op: str
    args: tuple[Literal, ...] = ()


@dataclass(frozen=True)
class Group:
    combinator: str  # "and" | "or"
    children: tuple["FilterExpr", ...]


FilterExpr = Union[Condition, Group]


class FilterParseError(ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    field: str | None = None


def _parse_literal(value, path: str) -> Literal:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise FilterParseError(
            f"argument must be text or integer, got {type(value).__name__}", path
        )
    return value


def _parse_node(obj, path: str) -> FilterExpr:
    if not isinstance(obj, dict):
        raise FilterParseError(f"expected object, got {type(obj).__name__}", path)
    for combinator in ("and", "or"):
        if combinator in obj:
            extra = set(obj) - {combinator}
            if extra:
                raise FilterParseError(f"unexpected keys {sorted(extra)}", path)
            children = obj[combinator]
            if not isinstance(children, list):
                raise FilterParseError(f'"{combinator}" must hold a list', path)
            if not children:
                raise FilterParseError("empty group", path)
            return Group(
                combinator,
                tuple(
                    _parse_node(child, f"{path}.{combinator}[{i}]")
                    for i, child in enumerate(children)
                ),
            )
    extra = set(obj) - {"field", "op", "args"}
    if extra:
        raise FilterParseError(f"unexpected keys {sorted(extra)}", path)
    if "field" not in obj or "op" not in obj:
        raise FilterParseError('node needs "and", "or", or "field"+"op"', path)
    if not isinstance(obj["field"], str):
        raise FilterParseError('"field" must be text', path)
    op = obj["op"]
    if op not in OPERATORS:
        raise FilterParseError(f"unknown operator {op!r}", path)
    raw_args = obj.get("args", [])
    if not isinstance(raw_args, list):
        raise FilterParseError('"args" must be a list', path)
    args = tuple(
        _parse_literal(a, f"{path}.args[{i}]") for i, a in enumerate(raw_args)
    )
    lo, hi = OPERATOR_ARITY[op]
    if len(args) < lo or (hi is not None and len(args) > hi):
        expected = str(lo) if lo == hi else f"at least {lo}"
        raise FilterParseError(
            f"operator {op} takes {expected} argument(s), got {len(args)}", path
        )
    return Condition(obj["field"], op, args)


def filter_from_obj(obj) -> FilterExpr:
    """Build the AST from an already decoded wire object."""
    return _parse_node(obj, "$")


def parse_filter(text: str | bytes) -> FilterExpr:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FilterParseError(f"syntax error at position {exc.pos}: {exc.msg}") from exc
    return filter_from_obj(obj)


def _to_obj(expr: FilterExpr):
    if isinstance(expr, Group):
        return {expr.combinator: [_to_obj(child) for child in expr.children]}
    return {"field": expr.field, "op": expr.op, "args": list(expr.args)}


def serialize_filter(expr: FilterExpr) -> str:
    """Inverse of parse_filter up to AST equality."""
    return json.dumps(_to_obj(expr))


def filter_to_obj(expr: FilterExpr):
    return _to_obj(expr)


def expr_stats(expr: FilterExpr) -> tuple[int, int]:
    """(nesting depth, condition count), for request guardrails."""
    if isinstance(expr, Condition):
        return 1, 1
    depths, counts = zip(*(expr_stats(child) for child in expr.children))
    return 1 + max(depths), sum(counts)


def validate(expr: FilterExpr, schema: Schema) -> list[ValidationIssue]:
    """All reasons the expression cannot run against ``schema``."""
    issues: list[ValidationIssue] = []

    def walk(node: FilterExpr) -> None:
        if isinstance(node, Group):
            for child in node.children:
                walk(child)
            return
        if node.field not in schema:
            issues.append(
                ValidationIssue("unknown_field", f"unknown field {node.field!r}", node.field)
            )
            return
        descriptor = schema.field(node.field)
        dtype = descriptor.data_type
        if node.op not in OPERATORS:
            issues.append(
                ValidationIssue("unknown_operator", f"unknown operator {node.op!r}", node.field)
            )
            return
        if node.op not in OPERATOR_MATRIX[dtype]:
            issues.append(
                ValidationIssue(
                    "operator_not_allowed",
                    f"operator {node.op} not allowed for {dtype.value}",
                    descriptor.source_name,
                )
            )
        lo, hi = OPERATOR_ARITY[node.op]
        if len(node.args) < lo or (hi is not None and len(node.args) > hi):
            expected = str(lo) if lo == hi else f"at least {lo}"
            issues.append(
                ValidationIssue(
                    "arity",
                    f"operator {node.op} takes {expected} argument(s), got {len(node.args)}",
                    descriptor.source_name,
                )
            )
        elif dtype is DataType.INTEGER and node.op not in ("is_null", "is_not_null"):
            if not all(isinstance(a, int) for a in node.args):
                issues.append(
                    ValidationIssue(
                        "argument_type",
                        f"{descriptor.source_name} is Integer; arguments must be integers",
                        descriptor.source_name,
                    )
                )
        elif dtype is not DataType.INTEGER and node.op not in ("is_null", "is_not_null"):
            if not all(isinstance(a, str) for a in node.args):
                issues.append(
                    ValidationIssue(
                        "argument_type",
                        f"{descriptor.source_name} is {dtype.value}; arguments must be text",
                        descriptor.source_name,
                    )
                )

    walk(expr)
    return issues


def _integer_mask(col: IntegerColumn, op: str, args: tuple[Literal, ...]) -> np.ndarray:
    non_null = ~col.nulls
    v = col.values
    if op == "is_null":
        return col.nulls.copy()
    if op == "is_not_null":
        return non_null.copy()
    if op == "equal":
        return non_null & (v == args[0])
    if op == "not_equal":
        return non_null & (v != args[0])
    if op == "less":
        return non_null & (v < args[0])
    if op == "less_or_equal":
        return non_null & (v <= args[0])
    if op == "greater":
        return non_null & (v > args[0])
    if op == "greater_or_equal":
        return non_null & (v >= args[0])
    if op == "between":
        return non_null & (v >= args[0]) & (v <= args[1])
    if op == "in":
        return non_null & np.isin(v, list(args))
    if op == "not_in":
        return non_null & ~np.isin(v, list(args))
    raise ValueError(f"operator {op} not defined for Integer")


def _factor_mask(col: FactorColumn, op: str, args: tuple[Literal, ...]) -> np.ndarray:
    non_null = ~col.nulls
    if op == "is_null":
        return col.nulls.copy()
    if op == "is_not_null":
        return non_null.copy()
    # equal / not_equal test against the dictionary, then map over codes.
    try:
        code = col.dictionary.index(args[0])
    except ValueError:
        code = None
    if op == "equal":
        if code is None:
            return np.zeros(len(col), dtype=bool)
        return non_null & (col.codes == code)
    if op == "not_equal":
        if code is None:
            return non_null.copy()
        return non_null & (col.codes != code)
    raise ValueError(f"operator {op} not defined for Factor")


def _string_mask(col: StringColumn, op: str, args: tuple[Literal, ...]) -> np.ndarray:
    values = col.values
    n = len(values)
    mask = np.zeros(n, dtype=bool)
    if op == "is_null":
        for i, v in enumerate(values):
            mask[i] = v is None
        return mask
    if op == "is_not_null":
        for i, v in enumerate(values):
            mask[i] = v is not None
        return mask
    if op == "equal":
        a = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v == a
    elif op == "not_equal":
        a = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v != a
    elif op == "less":
        a = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v < a
    elif op == "less_or_equal":
        a = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v <= a
    elif op == "greater":
        a = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v > a
    elif op == "greater_or_equal":
        a = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v >= a
    elif op == "between":
        lo, hi = args
        for i, v in enumerate(values):
            mask[i] = v is not None and lo <= v <= hi
    elif op == "in":
        members = set(args)
        for i, v in enumerate(values):
            mask[i] = v is not None and v in members
    elif op == "not_in":
        members = set(args)
        for i, v in enumerate(values):
            mask[i] = v is not None and v not in members
    elif op == "begins_with":
        prefix = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v.startswith(prefix)
    elif op == "ends_with":
        suffix = args[0]
        for i, v in enumerate(values):
            mask[i] = v is not None and v.endswith(suffix)
    else:
        raise ValueError(f"operator {op} not defined for String")
    return mask


def _condition_mask(cond: Condition, store: ColumnStore) -> np.ndarray:
    col = store.column(cond.field)
    if isinstance(col, IntegerColumn):
        return _integer_mask(col, cond.op, cond.args)
    if isinstance(col, FactorColumn):
        return _factor_mask(col, cond.op, cond.args)
    return _string_mask(col, cond.op, cond.args)


def _mask(expr: FilterExpr, store: ColumnStore) -> np.ndarray:
    if isinstance(expr, Condition):
        return _condition_mask(expr, store)
    masks = (_mask(child, store) for child in expr.children)
    if expr.combinator == "and":
        out = next(masks)
        for m in masks:
            out = out & m
        return out
    out = next(masks)
    for m in masks:
        out = out | m
    return out


def evaluate(expr: FilterExpr, store: ColumnStore) -> list[int]:
    """Row ids matching the expression, ascending.

    The expression must validate cleanly against the store's schema.
    """
    if store.row_count == 0:
        return []
    return [int(i) for i in np.flatnonzero(_mask(expr, store))]


@dataclass(frozen=True)
class SortSpec:
    field: str
    descending: bool = False


@dataclass
class ResultPage:
    total_matches: int
    offset: int
    rows: list[dict] = dc_field(default_factory=list)


def sort_row_ids(store: ColumnStore, row_ids: list[int], sort: SortSpec) -> list[int]:
    """Order rows by one column; nulls sort last either direction, ties
    keep ascending row id."""
    col = store.column(sort.field)
    sign = -1 if sort.descending else 1

    def compare(a: int, b: int) -> int:
        va, vb = col.cell(a), col.cell(b)
        if va is None or vb is None:
            if (va is None) != (vb is None):
                return 1 if va is None else -1
        elif va != vb:
            return sign if va > vb else -sign
        return -1 if a < b else 1

    return sorted(row_ids, key=cmp_to_key(compare))


def select_page(
    store: ColumnStore,
    row_ids: list[int],
    sort: SortSpec | None,
    offset: int,
    limit: int,
    link_template: str,
) -> ResultPage:
    if offset < 0:
        raise ValueError("offset must be >= 0")
    if limit < 1:
        raise ValueError("limit must be >= 1")
    ordered = sort_row_ids(store, row_ids, sort) if sort else row_ids
    page_ids = ordered[offset : offset + limit]
    rows = []
    for row_id in page_ids:
        cells = {}
        for descriptor in store.schema:
            value = store.columns[descriptor.source_name].cell(row_id)
            if descriptor.source_name == "ID_NOTICE_CAN" and value is not None:
                value = make_notice_link(str(value), link_template)
            cells[descriptor.display_name] = value
        rows.append(cells)
    return ResultPage(total_matches=len(row_ids), offset=offset, rows=rows)


def export_csv(store: ColumnStore, row_ids: list[int]) -> bytes:
    """RFC 4180 CSV of the selection: display-name header, nulls empty."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow([f.display_name for f in store.schema])
    for row_id in row_ids:
        writer.writerow(
            [
                "" if (v := store.columns[f.source_name].cell(row_id)) is None else v
                for f in store.schema
            ]
        )
    return out.getvalue().encode("utf-8")
