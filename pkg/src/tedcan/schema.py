"""Field registry for contract award notice (CAN) records.

The registry knows every queryable field, its data type, its user-facing
display name, and which filter operators apply to each type.  It is fixed
at build time: there is no schema evolution and no user-defined fields.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class DataType(enum.Enum):
    STRING = "String"
    FACTOR = "Factor"
    INTEGER = "Integer"


@dataclass(frozen=True)
class FieldDescriptor:
    source_name: str
    display_name: str
    data_type: DataType
    highlighted: bool = False


# Filter operators, in a fixed order. Per-type admissibility below.
OPERATORS = (
    "equal",
    "not_equal",
    "less",
    "less_or_equal",
    "greater",
    "greater_or_equal",
    "between",
    "in",
    "not_in",
    "begins_with",
    "ends_with",
    "is_null",
    "is_not_null",
)

OPERATOR_MATRIX: dict[DataType, tuple[str, ...]] = {
    DataType.STRING: OPERATORS,
    DataType.FACTOR: ("equal", "not_equal", "is_null", "is_not_null"),
    DataType.INTEGER: (
        "equal",
        "not_equal",
        "less",
        "less_or_equal",
        "greater",
        "greater_or_equal",
        "between",
        "in",
        "not_in",
        "is_null",
        "is_not_null",
    ),
}

# Operand count per operator: exact int, or (min, None) for open-ended.
OPERATOR_ARITY: dict[str, tuple[int, int | None]] = {
    "is_null": (0, 0),
    "is_not_null": (0, 0),
    "between": (2, 2),
    "in": (1, None),
    "not_in": (1, None),
}
for _op in OPERATORS:
    OPERATOR_ARITY.setdefault(_op, (1, 1))


class SchemaError(ValueError):
    pass


def operator_allowed(data_type: DataType, operator: str) -> bool:
    """True iff ``operator`` may be applied to fields of ``data_type``."""
    if operator not in OPERATORS:
        raise SchemaError(f"unknown operator: {operator!r}")
    return operator in OPERATOR_MATRIX[data_type]


class Schema:
    """An immutable, ordered collection of field descriptors.

    Fields can be addressed by source name or display name interchangeably;
    both namespaces are unique.
    """

    def __init__(self, fields: list[FieldDescriptor] | tuple[FieldDescriptor, ...]):
        self.fields: tuple[FieldDescriptor, ...] = tuple(fields)
        by_source: dict[str, FieldDescriptor] = {}
        by_display: dict[str, FieldDescriptor] = {}
        for f in self.fields:
            if f.source_name in by_source:
                raise SchemaError(f"duplicate source name: {f.source_name}")
            if f.display_name in by_display:
                raise SchemaError(f"duplicate display name: {f.display_name}")
            by_source[f.source_name] = f
            by_display[f.display_name] = f
        self._by_source = by_source
        self._by_display = by_display

    def __len__(self) -> int:
        return len(self.fields)

    def __iter__(self):
        return iter(self.fields)

    def __contains__(self, name: str) -> bool:
        return name in self._by_source or name in self._by_display

    def field(self, name: str) -> FieldDescriptor:
        """Look up a field by source name, falling back to display name."""
        f = self._by_source.get(name) or self._by_display.get(name)
        if f is None:
            raise SchemaError(f"unknown field: {name!r}")
        return f

    def source_names(self) -> list[str]:
        return [f.source_name for f in self.fields]

    def describe(self) -> list[dict]:
        """Machine-readable description, e.g. for the CLI schema export."""
        return [
            {
                "name": f.source_name,
                "display_name": f.display_name,
                "type": f.data_type.value,
                "highlighted": f.highlighted,
            }
            for f in self.fields
        ]


def _f(source: str, dtype: DataType, display: str | None = None) -> FieldDescriptor:
    return FieldDescriptor(
        source_name=source,
        display_name=display if display is not None else source,
        data_type=dtype,
        highlighted=display is not None,
    )


# The 48 fields of the curated CAN export. Nine carry a display rename and
# are highlighted in clients. Date fields are ISO-formatted text, kept as
# String so interval filters reduce to lexicographic comparison.
_FIELDS = (
    # Notice metadata
    _f("ID_NOTICE_CAN", DataType.STRING, "Award_Notice_Id_Link"),
    _f("YEAR", DataType.INTEGER),
    _f("ID_TYPE", DataType.FACTOR),
    _f("DT_DISPATCH", DataType.STRING, "Dispatch_Date"),
    # Contracting authority or entity identification
    _f("CAE_NAME", DataType.STRING, "Contracting_Authority_Name"),
    _f("CAE_NATIONALID", DataType.STRING),
    _f("CAE_ADDRESS", DataType.STRING),
    _f("CAE_TOWN", DataType.STRING),
    _f("CAE_POSTAL_CODE", DataType.STRING),
    _f("ISO_COUNTRY_CODE", DataType.FACTOR, "Contracting_Authority_Country"),
    # Winning bidder identification
    _f("WIN_NAME", DataType.STRING, "Contractor_Name"),
    _f("WIN_ADDRESS", DataType.STRING),
    _f("WIN_TOWN", DataType.STRING),
    _f("WIN_POSTAL_CODE", DataType.STRING),
    _f("WIN_COUNTRY_CODE", DataType.FACTOR, "Contractor_Country"),
    # CAN level variables
    _f("CAE_TYPE", DataType.FACTOR),
    _f("MAIN_ACTIVITY", DataType.STRING),
    _f("B_ON_BEHALF", DataType.FACTOR),
    _f("TYPE_OF_CONTRACT", DataType.FACTOR),
    _f("TAL_LOCATION_NUTS", DataType.STRING),
    _f("B_FRA_AGREEMENT", DataType.FACTOR),
    _f("B_DYN_PURCH_SYST", DataType.FACTOR),
    _f("CPV", DataType.STRING, "CPV_Code"),
    _f("ADDITIONAL_CPV1", DataType.STRING),
    _f("ADDITIONAL_CPV2", DataType.STRING),
    _f("ADDITIONAL_CPV3", DataType.STRING),
    _f("ADDITIONAL_CPV4", DataType.STRING),
    _f("B_GPA", DataType.FACTOR),
    _f("VALUE_EURO", DataType.INTEGER, "Contract_Value_Euros"),
    _f("VALUE_EURO_FIN_1", DataType.INTEGER),
    _f("VALUE_EURO_FIN_2", DataType.INTEGER),
    _f("TOP_TYPE", DataType.FACTOR),
    _f("CRIT_CODE", DataType.FACTOR),
    _f("CRIT_CRITERIA", DataType.STRING),
    _f("CRIT_WEIGHTS", DataType.STRING),
    _f("B_ELECTRONIC_AUCTION", DataType.FACTOR),
    # CA level variables
    _f("ID_AWARD", DataType.STRING),
    _f("CONTRACT_NUMBER", DataType.STRING),
    _f("LOT_NUMBER", DataType.STRING),
    _f("TITLE", DataType.STRING),
    _f("NUMBER_OFFERS", DataType.INTEGER, "Number_Offers_Received"),
    _f("NUMBER_OFFERS_ELECTR", DataType.INTEGER),
    _f("AWARD_EST_VALUE_EURO", DataType.INTEGER),
    _f("AWARD_VALUE_EURO", DataType.INTEGER),
    _f("AWARD_VALUE_EURO_FIN_1", DataType.INTEGER),
    _f("B_SUBCONTRACTED", DataType.FACTOR),
    _f("B_EU_FUNDS", DataType.FACTOR),
    _f("DT_AWARD", DataType.STRING),
)

_BUILTIN = Schema(list(_FIELDS))

# Fields run through each normalization step at ingest time.
DATE_FIELDS = ("DT_DISPATCH", "DT_AWARD")
COUNTRY_FIELDS = ("ISO_COUNTRY_CODE", "WIN_COUNTRY_CODE")


def builtin_schema() -> Schema:
    """The canonical 48-field CAN registry."""
    return _BUILTIN
