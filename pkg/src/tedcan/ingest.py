"""CSV ingestion and cell normalization for CAN exports.

Normalization applied per field:
  * DT_DISPATCH / DT_AWARD: "31-DEC-13" style dates to ISO "2013-12-31"
  * ISO_COUNTRY_CODE / WIN_COUNTRY_CODE: 2-letter codes to full names
  * every Integer field: decimal text to rounded integers

Cells that fail to normalize are stored as null and counted as warnings
in the ingest report; empty cells are null without a warning.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation, ROUND_HALF_UP
from typing import Sequence

from .countries import COUNTRY_NAMES
from .schema import COUNTRY_FIELDS, DATE_FIELDS, DataType, Schema
from .store import Cell, ColumnStore, FactorColumn, make_column

MONTHS = {
    "JAN": "01",
    "FEB": "02",
    "MAR": "03",
    "APR": "04",
    "MAY": "05",
    "JUN": "06",
    "JUL": "07",
    "AUG": "08",
    "SEP": "09",
    "OCT": "10",
    "NOV": "11",
    "DEC": "12",
}

# Data spans 2006-2015; two-digit years 90-99 are read as 1990s, the rest
# as 2000s.
CENTURY_PIVOT = 90

FACTOR_DISTINCT_LIMIT = 300


class IngestError(ValueError):
    pass


def _normalize_date(raw: str | None) -> tuple[str | None, bool]:
    """Returns (iso_date_or_none, warned)."""
    if raw is None or raw == "":
        return None, False
    text = raw.strip()
    # Already ISO: pass through so re-ingesting exported data is stable.
    if len(text) == 10 and text[4] == "-" and text[7] == "-":
        y, m, d = text[:4], text[5:7], text[8:10]
        if y.isdigit() and m.isdigit() and d.isdigit():
            return text, False
    parts = text.split("-")
    if len(parts) != 3:
        return None, True
    day, mon, year = parts
    month = MONTHS.get(mon.upper())
    if month is None or len(day) != 2 or not day.isdigit():
        return None, True
    if len(year) != 2 or not year.isdigit():
        return None, True
    yy = int(year)
    century = "19" if yy >= CENTURY_PIVOT else "20"
    return f"{century}{year}-{month}-{day}", False


def normalize_date(raw: str | None) -> str | None:
    """"31-DEC-13" -> "2013-12-31"; empty or unparseable input -> None."""
    return _normalize_date(raw)[0]


def _expand_country(code: str | None) -> tuple[str | None, bool]:
    if code is None or code == "":
        return None, False
    if len(code) != 2:
        # Longer text is taken as an already expanded name.
        return code, False
    name = COUNTRY_NAMES.get(code.upper())
    if name is None:
        return code, True
    return name, False


def expand_country(code: str | None) -> str | None:
    """2-letter code to full English name; unknown codes pass through."""
    return _expand_country(code)[0]


def _to_integer_value(raw: str | None) -> tuple[int | None, bool]:
    if raw is None or raw == "":
        return None, False
    try:
        value = Decimal(raw.strip())
    except InvalidOperation:
        return None, True
    if not value.is_finite():
        return None, True
    # Nearest integer, ties away from zero.
    return int(value.to_integral_value(rounding=ROUND_HALF_UP)), False


def to_integer_value(raw: str | None) -> int | None:
    """Decimal text to int, rounding ties away from zero; empty -> None."""
    return _to_integer_value(raw)[0]


def make_notice_link(notice_id: str | None, template: str) -> str | None:
    """Substitute the notice id for every "{id}" in the template."""
    if notice_id is None:
        return None
    return template.replace("{id}", notice_id)


def infer_factor_eligibility(distinct_count: int) -> bool:
    """Would a column with this many distinct values qualify as a Factor?

    Used only as a consistency check in the ingest report; the schema's
    fixed types stay authoritative.
    """
    if distinct_count < 0:
        raise ValueError("distinct_count must be >= 0")
    return distinct_count < FACTOR_DISTINCT_LIMIT


@dataclass
class IngestReport:
    rows_read: int = 0
    rows_kept: int = 0
    null_counts: dict[str, int] = field(default_factory=dict)
    warning_counts: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def render(self) -> str:
        lines = [
            f"rows read: {self.rows_read}",
            f"rows kept: {self.rows_kept}",
        ]
        warned = {k: v for k, v in self.warning_counts.items() if v}
        if warned:
            lines.append("normalization warnings:")
            for name in sorted(warned):
                lines.append(f"  {name}: {warned[name]}")
        lines.append("null cells per field:")
        for name, count in self.null_counts.items():
            lines.append(f"  {name}: {count}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def _normalize_cell(
    descriptor_name: str, data_type: DataType, raw: str | None
) -> tuple[Cell, bool]:
    if descriptor_name in DATE_FIELDS:
        return _normalize_date(raw)
    if descriptor_name in COUNTRY_FIELDS:
        return _expand_country(raw)
    if data_type is DataType.INTEGER:
        return _to_integer_value(raw)
    if raw == "":
        return None, False
    return raw, False


def _header_positions(path, header: list[str], schema: Schema) -> dict[str, int]:
    positions: dict[str, int] = {}
    for idx, cell in enumerate(header):
        name = cell.strip()
        if name and name in schema:
            source = schema.field(name).source_name
            if source in positions:
                raise IngestError(f"{path}: duplicate field {source} in header")
            positions[source] = idx
    if not positions:
        raise IngestError(f"{path}: header has no recognized fields")
    return positions


def ingest_csv(paths: Sequence, schema: Schema) -> tuple[ColumnStore, IngestReport]:
    """Parse and normalize CSV exports into a columnar store.

    Files are concatenated in the given order. Header cells may use source
    or display names; unknown columns are ignored, and schema fields absent
    from a file's header are null for that file's rows.
    """
    report = IngestReport()
    data: dict[str, list[Cell]] = {f.source_name: [] for f in schema}
    warnings = {f.source_name: 0 for f in schema}

    for path in paths:
        try:
            fh = open(path, "r", encoding="utf-8-sig", newline="")
        except OSError as exc:
            raise IngestError(f"cannot read {path}: {exc}") from exc
        with fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise IngestError(f"{path}: empty file, no header row") from None
            except csv.Error as exc:
                raise IngestError(f"{path}: {exc}") from exc
            positions = _header_positions(path, header, schema)

            file_rows = 0
            try:
                for row in reader:
                    file_rows += 1
                    for descriptor in schema:
                        source = descriptor.source_name
                        idx = positions.get(source)
                        raw = row[idx] if idx is not None and idx < len(row) else None
                        value, warned = _normalize_cell(source, descriptor.data_type, raw)
                        if warned:
                            warnings[source] += 1
                        data[source].append(value)
            except csv.Error as exc:
                raise IngestError(f"{path}: {exc}") from exc
        report.rows_read += file_rows

    report.rows_kept = report.rows_read
    report.warning_counts = warnings
    report.null_counts = {
        name: sum(1 for v in values if v is None) for name, values in data.items()
    }

    store = ColumnStore.from_columns(schema, data)
    for descriptor in schema:
        if descriptor.data_type is DataType.FACTOR:
            col = store.columns[descriptor.source_name]
            assert isinstance(col, FactorColumn)
            if not infer_factor_eligibility(len(col.dictionary)):
                report.notes.append(
                    f"{descriptor.source_name}: {len(col.dictionary)} distinct values "
                    f"exceeds the Factor threshold of {FACTOR_DISTINCT_LIMIT}"
                )
    return store, report
