"""Common Procurement Vocabulary: load, look up, and search the code table.

Codes are hierarchical 8-digit stems, optionally followed by a check
digit (stored verbatim, never validated). The first two digits name the
general division; trailing zeros mark category-level codes, so fixing a
digit limit d keeps exactly the stems whose digits beyond position d are
all zero.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources


class CpvError(ValueError):
    pass


@dataclass(frozen=True)
class CpvEntry:
    code: str  # 8 digits, or 9 with the check digit
    description: str

    @property
    def stem(self) -> str:
        return self.code[:8]

    @property
    def division(self) -> str:
        return self.code[:2]


def division_of(code: str) -> str:
    """First two digits of a code."""
    if len(code) < 2 or not code[:2].isdigit():
        raise CpvError(f"not a CPV code: {code!r}")
    return code[:2]


def _normalize_code(raw: str) -> str | None:
    """Accepts "03000000", "030000001", and the hyphenated "03000000-1"."""
    code = raw.strip().replace("-", "")
    if not code.isdigit() or len(code) not in (8, 9):
        return None
    return code


class CpvTable:
    def __init__(self, entries: list[CpvEntry]):
        self.entries = entries
        self._by_stem = {e.stem: e for e in entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def lookup(self, code: str) -> str | None:
        """Description for a code, matching on the 8-digit stem.

        Short codes are taken at category level: "30" means 30000000.
        A 9th digit is ignored. Returns None when nothing matches.
        """
        text = code.strip().replace("-", "")
        if not text.isdigit() or not 2 <= len(text) <= 9:
            return None
        stem = text[:8].ljust(8, "0")
        entry = self._by_stem.get(stem)
        return entry.description if entry else None

    def search(self, query: str, digit_limit: int | None = None) -> list[CpvEntry]:
        """Entries whose description contains the query (case-insensitive)
        or whose code starts with it, optionally restricted to codes of at
        most ``digit_limit`` significant digits."""
        if digit_limit is not None and not 2 <= digit_limit <= 8:
            raise CpvError("digit_limit must be between 2 and 8")
        needle = query.lower()
        hits = []
        for entry in self.entries:
            if needle in entry.description.lower() or entry.code.startswith(query):
                if digit_limit is None or set(entry.stem[digit_limit:]) <= {"0"}:
                    hits.append(entry)
        hits.sort(key=lambda e: e.code)
        return hits


def load_cpv(path) -> CpvTable:
    """Read a code,description CSV; an optional header row is skipped."""
    try:
        fh = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise CpvError(f"cannot read {path}: {exc}") from exc

    entries: list[CpvEntry] = []
    seen: dict[str, int] = {}
    with fh:
        reader = csv.reader(fh)
        for line_no, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise CpvError(f"line {line_no}: expected code,description")
            code = _normalize_code(row[0])
            if code is None:
                if line_no == 1:
                    continue  # header row
                raise CpvError(f"line {line_no}: bad code {row[0]!r}")
            description = row[1].strip()
            if not description:
                raise CpvError(f"line {line_no}: empty description")
            stem = code[:8]
            if stem in seen:
                raise CpvError(
                    f"line {line_no}: duplicate code {stem} (first at line {seen[stem]})"
                )
            seen[stem] = line_no
            entries.append(CpvEntry(code=code, description=description))
    return CpvTable(entries)


def bundled_sample_path():
    """A small, faithful subset of the current nomenclature, for demos and
    tests; point load_cpv at the official file for the full table."""
    return resources.files("tedcan.data").joinpath("cpv_sample.csv")
