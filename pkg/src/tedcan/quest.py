"""Lottery-style quests: find the biggest suppliers of X in country Y in
year Z, with a prefilled filter revealing the answer.

A quest is a (CPV division, country, year) triple that matches enough
rows to be interesting. Year membership is expressed as a dispatch-date
interval so the generated filter shows users a date range they can edit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cpv import CpvTable
from .filters import Condition, FilterExpr, Group
from .store import ColumnStore

DEFAULT_MIN_SUPPORT = 10


class QuestError(ValueError):
    pass


@dataclass(frozen=True)
class Quest:
    cpv_division: str
    division_label: str
    country: str
    year: int
    title: str


def _row_triples(store: ColumnStore):
    cpv = store.columns["CPV"]
    country = store.columns["ISO_COUNTRY_CODE"]
    dispatch = store.columns["DT_DISPATCH"]
    for row_id in range(store.row_count):
        code = cpv.cell(row_id)
        name = country.cell(row_id)
        date = dispatch.cell(row_id)
        if code is None or name is None or date is None:
            continue
        if len(code) < 2 or not code[:2].isdigit():
            continue
        if len(date) < 4 or not date[:4].isdigit():
            continue
        yield code[:2], name, int(date[:4])


def generate_quest(
    store: ColumnStore,
    cpv_table: CpvTable,
    seed: int,
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> Quest:
    """Pick uniformly, deterministically for a seed, among all triples
    supported by at least ``min_support`` rows."""
    counts: dict[tuple[str, str, int], int] = {}
    for triple in _row_triples(store):
        counts[triple] = counts.get(triple, 0) + 1

    candidates = sorted(
        triple
        for triple, count in counts.items()
        if count >= min_support and cpv_table.lookup(triple[0]) is not None
    )
    if not candidates:
        raise QuestError("no quest available")

    division, country, year = random.Random(seed).choice(candidates)
    label = cpv_table.lookup(division)
    assert label is not None
    return Quest(
        cpv_division=division,
        division_label=label,
        country=country,
        year=year,
        title=f"{label} in {country} in {year}",
    )


def solution_filter(quest: Quest) -> FilterExpr:
    """The conditions answering the quest, ready to prefill a builder."""
    return Group(
        "and",
        (
            Condition("Contracting_Authority_Country", "equal", (quest.country,)),
            Condition("CPV_Code", "begins_with", (quest.cpv_division,)),
            Condition(
                "Dispatch_Date",
                "between",
                (f"{quest.year}-01-01", f"{quest.year}-12-31"),
            ),
        ),
    )
