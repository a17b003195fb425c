"""Money-flow aggregation between contracting authorities and contractors.

A selection of rows is grouped by the exact (authority, contractor) name
pair; each group becomes one link whose value is the sum of contract
values. Rows with a null value still count as contracts but add nothing
to the flow; rows with a missing party name fall into an "(unknown)"
bucket. Summary statistics always describe the full selection, even when
the link list is truncated for rendering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ingest import make_notice_link
from .store import ColumnStore

UNKNOWN_LABEL = "(unknown)"

DEFAULT_MAX_LINKS = 200


@dataclass
class SummaryStats:
    n_authorities: int
    n_contractors: int
    n_contracts: int
    total_value_euros: int


@dataclass
class SankeyLink:
    authority: int  # index into SankeyGraph.authority_nodes
    contractor: int  # index into SankeyGraph.contractor_nodes
    value: int
    contract_count: int
    notice_links: list[str] = field(default_factory=list)


@dataclass
class SankeyGraph:
    authority_nodes: list[tuple[str, int]]
    contractor_nodes: list[tuple[str, int]]
    links: list[SankeyLink]
    stats: SummaryStats
    rows_with_null_value: int
    truncated: bool


def summary_stats(store: ColumnStore, row_ids: list[int]) -> SummaryStats:
    authorities = set()
    contractors = set()
    total = 0
    cae = store.columns["CAE_NAME"]
    win = store.columns["WIN_NAME"]
    value = store.columns["VALUE_EURO"]
    for row_id in row_ids:
        a = cae.cell(row_id)
        if a is not None:
            authorities.add(a)
        c = win.cell(row_id)
        if c is not None:
            contractors.add(c)
        v = value.cell(row_id)
        if v is not None:
            total += v
    return SummaryStats(
        n_authorities=len(authorities),
        n_contractors=len(contractors),
        n_contracts=len(row_ids),
        total_value_euros=total,
    )


def build_sankey(
    store: ColumnStore,
    row_ids: list[int],
    max_links: int | None = DEFAULT_MAX_LINKS,
    link_template: str = "{id}",
) -> SankeyGraph:
    cae = store.columns["CAE_NAME"]
    win = store.columns["WIN_NAME"]
    value = store.columns["VALUE_EURO"]
    notice = store.columns["ID_NOTICE_CAN"]

    groups: dict[tuple[str, str], list] = {}
    rows_with_null_value = 0
    for row_id in row_ids:
        a = cae.cell(row_id)
        c = win.cell(row_id)
        key = (
            UNKNOWN_LABEL if a is None else a,
            UNKNOWN_LABEL if c is None else c,
        )
        entry = groups.get(key)
        if entry is None:
            entry = groups[key] = [0, 0, []]
        v = value.cell(row_id)
        if v is None:
            rows_with_null_value += 1
        else:
            entry[0] += v
        entry[1] += 1
        notice_id = notice.cell(row_id)
        if notice_id is not None:
            entry[2].append(make_notice_link(str(notice_id), link_template))

    stats = summary_stats(store, row_ids)

    ordered = sorted(
        groups.items(), key=lambda item: (-item[1][0], item[0][0], item[0][1])
    )
    truncated = max_links is not None and len(ordered) > max_links
    if truncated:
        ordered = ordered[:max_links]

    # Node totals reflect the links actually kept, so the rendered diagram
    # stays internally consistent under truncation.
    authority_totals: dict[str, int] = {}
    contractor_totals: dict[str, int] = {}
    for (a, c), (v, _count, _links) in ordered:
        authority_totals[a] = authority_totals.get(a, 0) + v
        contractor_totals[c] = contractor_totals.get(c, 0) + v
    authority_nodes = sorted(authority_totals.items(), key=lambda kv: (-kv[1], kv[0]))
    contractor_nodes = sorted(contractor_totals.items(), key=lambda kv: (-kv[1], kv[0]))
    authority_index = {name: i for i, (name, _t) in enumerate(authority_nodes)}
    contractor_index = {name: i for i, (name, _t) in enumerate(contractor_nodes)}

    links = [
        SankeyLink(
            authority=authority_index[a],
            contractor=contractor_index[c],
            value=v,
            contract_count=count,
            notice_links=sorted(notices),
        )
        for (a, c), (v, count, notices) in ordered
    ]
    return SankeyGraph(
        authority_nodes=authority_nodes,
        contractor_nodes=contractor_nodes,
        links=links,
        stats=stats,
        rows_with_null_value=rows_with_null_value,
        truncated=truncated,
    )
