"""Immutable columnar snapshot of CAN records, with on-disk format.

File layout (OTED v1, all integers little-endian, text UTF-8):

    magic   4 bytes  "OTED"
    version u16      1
    rows    u64
    cols    u32
    directory, one entry per column:
        name length u32, name bytes,
        type tag u8 (0=String, 1=Factor, 2=Integer),
        payload offset u64 (absolute), payload length u64
    payloads, per type:
        Integer: null bitset, then rows * i64
        Factor:  dict count u32, dict entries (u32 length + bytes),
                 null bitset, rows * u32 dictionary indices
        String:  null bitset, (rows+1) * u64 offsets, byte blob

Null bitsets hold ceil(rows/8) bytes, LSB-first within each byte: row i
maps to byte i//8, bit i%8, set = null. Null entries carry a zero/empty
payload slot that readers must never interpret.

There is no general-purpose block compression: dictionary and binary
encoding keep the file seekable and simple.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .schema import DataType, FieldDescriptor, Schema, builtin_schema

MAGIC = b"OTED"
VERSION = 1

_TYPE_TAGS = {DataType.STRING: 0, DataType.FACTOR: 1, DataType.INTEGER: 2}
_TAG_TYPES = {v: k for k, v in _TYPE_TAGS.items()}

Cell = Union[str, int, None]


class StoreFormatError(ValueError):
    """Raised when a store file is structurally invalid."""


@dataclass
class IntegerColumn:
    values: np.ndarray  # int64, zero where null
    nulls: np.ndarray  # bool

    data_type = DataType.INTEGER

    def __len__(self) -> int:
        return len(self.values)

    def cell(self, row: int) -> Cell:
        return None if self.nulls[row] else int(self.values[row])


@dataclass
class FactorColumn:
    dictionary: tuple[str, ...]  # lexicographically sorted, compact
    codes: np.ndarray  # uint32 into dictionary, zero where null
    nulls: np.ndarray  # bool

    data_type = DataType.FACTOR

    def __len__(self) -> int:
        return len(self.codes)

    def cell(self, row: int) -> Cell:
        return None if self.nulls[row] else self.dictionary[self.codes[row]]


@dataclass
class StringColumn:
    values: list[str | None]  # None = null

    data_type = DataType.STRING

    def __len__(self) -> int:
        return len(self.values)

    def cell(self, row: int) -> Cell:
        return self.values[row]


Column = Union[IntegerColumn, FactorColumn, StringColumn]


def _integer_column(values: Iterable[int | None]) -> IntegerColumn:
    vals = list(values)
    nulls = np.fromiter((v is None for v in vals), dtype=bool, count=len(vals))
    data = np.fromiter((0 if v is None else v for v in vals), dtype=np.int64, count=len(vals))
    return IntegerColumn(values=data, nulls=nulls)


def _factor_column(values: Iterable[str | None]) -> FactorColumn:
    vals = list(values)
    dictionary = tuple(sorted({v for v in vals if v is not None}))
    code_of = {v: i for i, v in enumerate(dictionary)}
    nulls = np.fromiter((v is None for v in vals), dtype=bool, count=len(vals))
    codes = np.fromiter(
        (0 if v is None else code_of[v] for v in vals), dtype=np.uint32, count=len(vals)
    )
    return FactorColumn(dictionary=dictionary, codes=codes, nulls=nulls)


def make_column(data_type: DataType, values: Iterable[Cell]) -> Column:
    if data_type is DataType.INTEGER:
        return _integer_column(values)
    if data_type is DataType.FACTOR:
        return _factor_column(values)
    return StringColumn(values=list(values))


class ColumnStore:
    """All rows of an ingested dataset, one column per schema field."""

    def __init__(self, schema: Schema, columns: dict[str, Column], row_count: int):
        for name, col in columns.items():
            if len(col) != row_count:
                raise ValueError(f"column {name} has {len(col)} rows, expected {row_count}")
        self.schema = schema
        self.columns = columns
        self.row_count = row_count

    @classmethod
    def from_columns(cls, schema: Schema, data: dict[str, list[Cell]]) -> "ColumnStore":
        """Build a store from per-field value lists.

        Fields of the schema missing from ``data`` become all-null columns.
        """
        lengths = {len(v) for v in data.values()}
        if len(lengths) > 1:
            raise ValueError(f"ragged columns: lengths {sorted(lengths)}")
        n = lengths.pop() if lengths else 0
        columns: dict[str, Column] = {}
        for field in schema:
            values = data.get(field.source_name, [None] * n)
            columns[field.source_name] = make_column(field.data_type, values)
        unknown = set(data) - set(schema.source_names())
        if unknown:
            raise ValueError(f"fields not in schema: {sorted(unknown)}")
        return cls(schema, columns, n)

    def column(self, name: str) -> Column:
        field = self.schema.field(name)
        return self.columns[field.source_name]

    def cell(self, name: str, row: int) -> Cell:
        return self.column(name).cell(row)

    def row(self, row: int) -> dict[str, Cell]:
        return {name: col.cell(row) for name, col in self.columns.items()}


def column_distinct_values(store: ColumnStore, field: str) -> list[str]:
    """Sorted dictionary values of a Factor column (the user choice list)."""
    descriptor = store.schema.field(field)
    if descriptor.data_type is not DataType.FACTOR:
        raise ValueError(f"field {descriptor.source_name} is not a Factor")
    col = store.columns[descriptor.source_name]
    assert isinstance(col, FactorColumn)
    return list(col.dictionary)


def _pack_nulls(nulls: np.ndarray) -> bytes:
    return np.packbits(nulls, bitorder="little").tobytes()


def _unpack_nulls(buf: bytes, n: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little")
    return bits[:n].astype(bool)


def _encode_payload(col: Column) -> bytes:
    n = len(col)
    if isinstance(col, IntegerColumn):
        values = np.where(col.nulls, 0, col.values).astype("<i8")
        return _pack_nulls(col.nulls) + values.tobytes()
    if isinstance(col, FactorColumn):
        parts = [struct.pack("<I", len(col.dictionary))]
        for value in col.dictionary:
            raw = value.encode("utf-8")
            parts.append(struct.pack("<I", len(raw)))
            parts.append(raw)
        parts.append(_pack_nulls(col.nulls))
        codes = np.where(col.nulls, 0, col.codes).astype("<u4")
        parts.append(codes.tobytes())
        return b"".join(parts)
    nulls = np.fromiter((v is None for v in col.values), dtype=bool, count=n)
    blob_parts: list[bytes] = []
    offsets = np.zeros(n + 1, dtype="<u8")
    pos = 0
    for i, value in enumerate(col.values):
        if value is not None:
            raw = value.encode("utf-8")
            blob_parts.append(raw)
            pos += len(raw)
        offsets[i + 1] = pos
    return _pack_nulls(nulls) + offsets.tobytes() + b"".join(blob_parts)


def write_store(store: ColumnStore, path) -> None:
    """Serialize; identical stores produce byte-identical files."""
    names = list(store.columns.keys())
    payloads = [_encode_payload(store.columns[name]) for name in names]

    directory_size = 0
    encoded_names = [name.encode("utf-8") for name in names]
    for raw in encoded_names:
        directory_size += 4 + len(raw) + 1 + 8 + 8
    header_size = 4 + 2 + 8 + 4

    out = bytearray()
    out += MAGIC
    out += struct.pack("<H", VERSION)
    out += struct.pack("<Q", store.row_count)
    out += struct.pack("<I", len(names))
    offset = header_size + directory_size
    for raw, name, payload in zip(encoded_names, names, payloads):
        col = store.columns[name]
        out += struct.pack("<I", len(raw))
        out += raw
        out += struct.pack("<B", _TYPE_TAGS[col.data_type])
        out += struct.pack("<QQ", offset, len(payload))
        offset += len(payload)
    for payload in payloads:
        out += payload
    try:
        with open(path, "wb") as fh:
            fh.write(out)
    except OSError as exc:
        raise OSError(f"cannot write store to {path}: {exc}") from exc


class _Reader:
    def __init__(self, buf: bytes, pos: int = 0):
        self.buf = buf
        self.pos = pos

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise StoreFormatError("truncated file")
        chunk = self.buf[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]


def _decode_payload(data_type: DataType, buf: bytes, n: int) -> Column:
    r = _Reader(buf)
    if data_type is DataType.INTEGER:
        nulls = _unpack_nulls(r.take((n + 7) // 8), n)
        values = np.frombuffer(r.take(8 * n), dtype="<i8").astype(np.int64)
        values = np.where(nulls, 0, values)
        return IntegerColumn(values=values, nulls=nulls)
    if data_type is DataType.FACTOR:
        dict_count = r.u32()
        dictionary = tuple(r.take(r.u32()).decode("utf-8") for _ in range(dict_count))
        nulls = _unpack_nulls(r.take((n + 7) // 8), n)
        codes = np.frombuffer(r.take(4 * n), dtype="<u4").astype(np.uint32)
        codes = np.where(nulls, 0, codes)
        if len(codes) and not nulls.all():
            if codes[~nulls].size and int(codes[~nulls].max(initial=0)) >= dict_count:
                raise StoreFormatError("factor index out of dictionary range")
        return FactorColumn(dictionary=dictionary, codes=codes, nulls=nulls)
    nulls = _unpack_nulls(r.take((n + 7) // 8), n)
    offsets = np.frombuffer(r.take(8 * (n + 1)), dtype="<u8")
    if n and (np.diff(offsets.astype(np.int64)) < 0).any():
        raise StoreFormatError("string offsets decrease")
    blob = r.take(int(offsets[-1]) if n else 0)
    values: list[str | None] = []
    for i in range(n):
        if nulls[i]:
            values.append(None)
        else:
            values.append(blob[int(offsets[i]) : int(offsets[i + 1])].decode("utf-8"))
    return StringColumn(values=values)


def _schema_for(names: list[str], types: list[DataType]) -> Schema:
    """Schema for a freshly read store.

    Columns matching the builtin registry by name and type keep their
    display names and highlight flags; anything else is passed through.
    """
    builtin = builtin_schema()
    fields = []
    for name, dtype in zip(names, types):
        if name in builtin and builtin.field(name).data_type is dtype:
            fields.append(builtin.field(name))
        else:
            fields.append(FieldDescriptor(name, name, dtype))
    return Schema(fields)


def read_store(path) -> ColumnStore:
    try:
        with open(path, "rb") as fh:
            buf = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read store from {path}: {exc}") from exc

    r = _Reader(buf)
    if r.take(4) != MAGIC:
        raise StoreFormatError("bad magic")
    version = r.u16()
    if version != VERSION:
        raise StoreFormatError(f"unsupported version {version}")
    row_count = r.u64()
    column_count = r.u32()

    entries = []
    for _ in range(column_count):
        name = r.take(r.u32()).decode("utf-8")
        tag = r.u8()
        if tag not in _TAG_TYPES:
            raise StoreFormatError(f"unknown column type tag {tag}")
        offset = r.u64()
        length = r.u64()
        if offset + length > len(buf):
            raise StoreFormatError("truncated file")
        entries.append((name, _TAG_TYPES[tag], offset, length))

    columns: dict[str, Column] = {}
    for name, dtype, offset, length in entries:
        if name in columns:
            raise StoreFormatError(f"duplicate column {name}")
        columns[name] = _decode_payload(dtype, buf[offset : offset + length], row_count)

    schema = _schema_for([e[0] for e in entries], [e[1] for e in entries])
    return ColumnStore(schema, columns, row_count)
