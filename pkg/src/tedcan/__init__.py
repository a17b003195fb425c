"""tedcan: engine and web service for European contract award notices."""

from .schema import DataType, FieldDescriptor, Schema, builtin_schema, operator_allowed
from .store import ColumnStore, column_distinct_values, read_store, write_store
from .ingest import ingest_csv
from .filters import evaluate, parse_filter, select_page, serialize_filter, validate
from .cpv import load_cpv
from .quest import generate_quest, solution_filter
from .service import create_app

__all__ = [
    "DataType",
    "FieldDescriptor",
    "Schema",
    "builtin_schema",
    "operator_allowed",
    "ColumnStore",
    "column_distinct_values",
    "read_store",
    "write_store",
    "ingest_csv",
    "evaluate",
    "parse_filter",
    "select_page",
    "serialize_filter",
    "validate",
    "load_cpv",
    "generate_quest",
    "solution_filter",
    "create_app",
]
