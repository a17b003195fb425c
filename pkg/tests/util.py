"""Shared synthetic-data builders for the test suite."""

from __future__ import annotations

import random

from tedcan.filters import Condition, FilterExpr, Group
from tedcan.schema import (
    DataType,
    FieldDescriptor,
    OPERATOR_MATRIX,
    Schema,
    builtin_schema,
)
from tedcan.store import ColumnStore

FACTOR_POOL = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"]
WORD_POOL = [
    "Anvil", "Bridge", "Canal", "Depot", "Energie", "Fabrik", "Grange",
    "Hôpital", "Institut", "Jardin", "Kommun", "Lycée", "Mairie", "Nord",
    "Office", "Provincie", "Quartier", "Région", "Stad", "Therme",
]


def synthetic_schema() -> Schema:
    return Schema(
        [
            FieldDescriptor("name", "Name", DataType.STRING),
            FieldDescriptor("code", "Code", DataType.STRING),
            FieldDescriptor("day", "Day", DataType.STRING),
            FieldDescriptor("kind", "Kind", DataType.FACTOR),
            FieldDescriptor("region", "Region", DataType.FACTOR),
            FieldDescriptor("amount", "Amount", DataType.INTEGER),
            FieldDescriptor("count", "Count", DataType.INTEGER),
        ]
    )


def _maybe_null(rng: random.Random, null_rate: float, value):
    return None if rng.random() < null_rate else value


def random_word(rng: random.Random) -> str:
    return f"{rng.choice(WORD_POOL)} {rng.choice(WORD_POOL)} {rng.randrange(100)}"


def random_date(rng: random.Random) -> str:
    return f"{rng.randrange(2006, 2016)}-{rng.randrange(1, 13):02d}-{rng.randrange(1, 29):02d}"


def random_store(
    rng: random.Random, n_rows: int, null_rate: float = 0.1
) -> ColumnStore:
    schema = synthetic_schema()
    data = {
        "name": [_maybe_null(rng, null_rate, random_word(rng)) for _ in range(n_rows)],
        "code": [
            _maybe_null(rng, null_rate, f"{rng.randrange(10**7, 10**8)}")
            for _ in range(n_rows)
        ],
        "day": [_maybe_null(rng, null_rate, random_date(rng)) for _ in range(n_rows)],
        "kind": [
            _maybe_null(rng, null_rate, rng.choice(FACTOR_POOL)) for _ in range(n_rows)
        ],
        "region": [
            _maybe_null(rng, null_rate, rng.choice(FACTOR_POOL[:5]))
            for _ in range(n_rows)
        ],
        "amount": [
            _maybe_null(rng, null_rate, rng.randrange(-10**6, 10**7))
            for _ in range(n_rows)
        ],
        "count": [_maybe_null(rng, null_rate, rng.randrange(0, 40)) for _ in range(n_rows)],
    }
    return ColumnStore.from_columns(schema, data)


def random_can_store(rng: random.Random, n_rows: int, null_rate: float = 0.1) -> ColumnStore:
    """Synthetic rows on the real registry, for analytics/quest/service tests."""
    countries = ["Belgium", "France", "Sweden", "Poland", "Germany"]
    divisions = ["30", "45", "66", "72", "90"]
    data = {
        "ID_NOTICE_CAN": [str(201300000 + i) for i in range(n_rows)],
        "CAE_NAME": [
            _maybe_null(rng, null_rate, f"Authority {rng.randrange(12)}")
            for _ in range(n_rows)
        ],
        "WIN_NAME": [
            _maybe_null(rng, null_rate, f"Supplier {rng.randrange(15)}")
            for _ in range(n_rows)
        ],
        "ISO_COUNTRY_CODE": [
            _maybe_null(rng, null_rate, rng.choice(countries)) for _ in range(n_rows)
        ],
        "WIN_COUNTRY_CODE": [
            _maybe_null(rng, null_rate, rng.choice(countries)) for _ in range(n_rows)
        ],
        "CPV": [
            _maybe_null(
                rng, null_rate, rng.choice(divisions) + f"{rng.randrange(10**6):06d}"
            )
            for _ in range(n_rows)
        ],
        "DT_DISPATCH": [
            _maybe_null(rng, null_rate, random_date(rng)) for _ in range(n_rows)
        ],
        "YEAR": [rng.randrange(2006, 2016) for _ in range(n_rows)],
        "VALUE_EURO": [
            _maybe_null(rng, null_rate, rng.randrange(0, 10**7)) for _ in range(n_rows)
        ],
        "NUMBER_OFFERS": [
            _maybe_null(rng, null_rate, rng.randrange(1, 30)) for _ in range(n_rows)
        ],
        "TYPE_OF_CONTRACT": [
            _maybe_null(rng, null_rate, rng.choice(["W", "U", "S"]))
            for _ in range(n_rows)
        ],
        "TITLE": [_maybe_null(rng, null_rate, random_word(rng)) for _ in range(n_rows)],
    }
    return ColumnStore.from_columns(builtin_schema(), data)


def _column_sample(rng: random.Random, store: ColumnStore, field: str):
    col = store.columns[store.schema.field(field).source_name]
    for _ in range(8):
        value = col.cell(rng.randrange(store.row_count))
        if value is not None:
            return value
    return None


def random_condition(
    rng: random.Random,
    store: ColumnStore,
    field: FieldDescriptor | None = None,
    op: str | None = None,
) -> Condition:
    schema = store.schema
    if field is None:
        field = rng.choice(list(schema.fields))
    if op is None:
        op = rng.choice(OPERATOR_MATRIX[field.data_type])

    def literal():
        # Mostly values that occur, sometimes fresh ones, for varied hits.
        if rng.random() < 0.7 and store.row_count:
            value = _column_sample(rng, store, field.source_name)
            if value is not None:
                return value
        if field.data_type is DataType.INTEGER:
            return rng.randrange(-10**6, 10**7)
        if field.data_type is DataType.FACTOR:
            return rng.choice(FACTOR_POOL + ["missing-kind"])
        return rng.choice([random_word(rng), random_date(rng), str(rng.randrange(10**8))])

    if op in ("is_null", "is_not_null"):
        args = ()
    elif op == "between":
        args = (literal(), literal())
        if isinstance(args[0], int) and args[0] > args[1] and rng.random() < 0.8:
            args = (args[1], args[0])
    elif op in ("in", "not_in"):
        args = tuple(literal() for _ in range(rng.randrange(1, 5)))
    elif op in ("begins_with", "ends_with"):
        value = literal()
        text = str(value)
        cut = rng.randrange(0, min(4, len(text)) + 1)
        args = ((text[:cut] if op == "begins_with" else text[-cut:]) if cut else text,)
    else:
        args = (literal(),)
    # Field name by either namespace, as the wire format allows.
    name = field.display_name if rng.random() < 0.5 else field.source_name
    return Condition(name, op, args)


def random_expr(
    rng: random.Random, store: ColumnStore, max_depth: int = 4
) -> FilterExpr:
    if max_depth <= 1 or rng.random() < 0.4:
        return random_condition(rng, store)
    children = tuple(
        random_expr(rng, store, max_depth - 1) for _ in range(rng.randrange(1, 4))
    )
    return Group(rng.choice(["and", "or"]), children)


def covered_pairs(expr: FilterExpr, schema: Schema) -> set[tuple[DataType, str]]:
    if isinstance(expr, Condition):
        return {(schema.field(expr.field).data_type, expr.op)}
    out: set[tuple[DataType, str]] = set()
    for child in expr.children:
        out |= covered_pairs(child, schema)
    return out


def stores_equal(a: ColumnStore, b: ColumnStore) -> bool:
    if a.row_count != b.row_count:
        return False
    if list(a.columns) != list(b.columns):
        return False
    for name in a.columns:
        if a.schema.field(name).data_type is not b.schema.field(name).data_type:
            return False
        for row in range(a.row_count):
            if a.cell(name, row) != b.cell(name, row):
                return False
    return True
