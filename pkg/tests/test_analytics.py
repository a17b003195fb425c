import random

from tedcan.analytics import UNKNOWN_LABEL, build_sankey, summary_stats
from tedcan.schema import builtin_schema
from tedcan.store import ColumnStore

from util import random_can_store


def small_store(rows):
    """rows: list of (authority, contractor, value, notice_id)."""
    return ColumnStore.from_columns(
        builtin_schema(),
        {
            "CAE_NAME": [r[0] for r in rows],
            "WIN_NAME": [r[1] for r in rows],
            "VALUE_EURO": [r[2] for r in rows],
            "ID_NOTICE_CAN": [r[3] for r in rows],
        },
    )


def link_values(graph):
    return {
        (graph.authority_nodes[l.authority][0], graph.contractor_nodes[l.contractor][0]): (
            l.value,
            l.contract_count,
        )
        for l in graph.links
    }


def test_single_row_graph():
    store = small_store([("A", "B", 100, "1")])
    graph = build_sankey(store, [0], link_template="https://t/{id}")
    assert graph.authority_nodes == [("A", 100)]
    assert graph.contractor_nodes == [("B", 100)]
    assert len(graph.links) == 1
    link = graph.links[0]
    assert (link.value, link.contract_count) == (100, 1)
    assert link.notice_links == ["https://t/1"]
    stats = graph.stats
    assert (stats.n_authorities, stats.n_contractors, stats.n_contracts,
            stats.total_value_euros) == (1, 1, 1, 100)


def test_same_pair_aggregates():
    store = small_store([("A", "B", 100, "1"), ("A", "B", 200, "2")])
    graph = build_sankey(store, [0, 1])
    assert len(graph.links) == 1
    assert graph.links[0].value == 300
    assert graph.links[0].contract_count == 2
    assert len(graph.links[0].notice_links) == 2


def test_null_names_fall_into_unknown_bucket():
    store = small_store([(None, "B", 50, "1"), ("A", None, 70, "2")])
    graph = build_sankey(store, [0, 1])
    names = link_values(graph)
    assert names[(UNKNOWN_LABEL, "B")] == (50, 1)
    assert names[("A", UNKNOWN_LABEL)] == (70, 1)
    # The unknown bucket is a label for links; stats count only real names.
    assert graph.stats.n_authorities == 1
    assert graph.stats.n_contractors == 1


def test_null_value_counts_contract_but_not_flow():
    store = small_store([("A", "B", None, "1"), ("A", "B", 40, "2")])
    graph = build_sankey(store, [0, 1])
    assert graph.links[0].value == 40
    assert graph.links[0].contract_count == 2
    assert graph.rows_with_null_value == 1
    assert graph.stats.total_value_euros == 40


def test_links_sorted_by_value_descending():
    store = small_store(
        [("A", "X", 10, "1"), ("B", "Y", 300, "2"), ("C", "Z", 200, "3")]
    )
    graph = build_sankey(store, [0, 1, 2])
    assert [l.value for l in graph.links] == [300, 200, 10]


def test_truncation_keeps_top_links_and_full_stats():
    store = small_store(
        [("A", "X", 10, "1"), ("B", "Y", 300, "2"), ("C", "Z", 200, "3")]
    )
    graph = build_sankey(store, [0, 1, 2], max_links=2)
    assert graph.truncated is True
    assert [l.value for l in graph.links] == [300, 200]
    # Stats describe the whole selection, not the truncated rendering.
    assert graph.stats.n_contracts == 3
    assert graph.stats.total_value_euros == 510
    # Node totals stay consistent with the kept links.
    for side, nodes in (("authority", graph.authority_nodes), ("contractor", graph.contractor_nodes)):
        for idx, (name, total) in enumerate(nodes):
            incident = sum(
                l.value
                for l in graph.links
                if (l.authority if side == "authority" else l.contractor) == idx
            )
            assert incident == total, (side, name)


def test_truncation_tie_break_by_names():
    store = small_store(
        [("B", "Y", 100, "1"), ("A", "Z", 100, "2"), ("A", "Y", 100, "3")]
    )
    graph = build_sankey(store, [0, 1, 2], max_links=2)
    kept = {
        (graph.authority_nodes[l.authority][0], graph.contractor_nodes[l.contractor][0])
        for l in graph.links
    }
    assert kept == {("A", "Y"), ("A", "Z")}


def test_summary_stats_empty_selection():
    store = small_store([("A", "B", 1, "1")])
    stats = summary_stats(store, [])
    assert (stats.n_authorities, stats.n_contractors, stats.n_contracts,
            stats.total_value_euros) == (0, 0, 0, 0)


def test_summary_stats_shared_authority():
    store = small_store([("A", "B", 10, "1"), ("A", "C", 20, "2")])
    stats = summary_stats(store, [0, 1])
    assert (stats.n_authorities, stats.n_contractors) == (1, 2)
    assert stats.n_contracts == 2
    assert stats.total_value_euros == 30


def brute_force_groups(store, row_ids):
    sums: dict[tuple[str, str], list] = {}
    for i in row_ids:
        a = store.cell("CAE_NAME", i) or UNKNOWN_LABEL
        c = store.cell("WIN_NAME", i) or UNKNOWN_LABEL
        v = store.cell("VALUE_EURO", i)
        entry = sums.setdefault((a, c), [0, 0])
        entry[0] += v if v is not None else 0
        entry[1] += 1
    return {k: tuple(v) for k, v in sums.items()}


def test_random_rows_match_group_sum_oracle():
    rng = random.Random(99)
    store = random_can_store(rng, 500, null_rate=0.2)
    row_ids = sorted(rng.sample(range(500), 350))
    graph = build_sankey(store, row_ids, max_links=None)
    assert link_values(graph) == brute_force_groups(store, row_ids)


def test_flow_conservation():
    rng = random.Random(123)
    store = random_can_store(rng, 400, null_rate=0.25)
    for _ in range(20):
        k = rng.randrange(0, 400)
        row_ids = sorted(rng.sample(range(400), k))
        graph = build_sankey(store, row_ids, max_links=None)
        assert sum(l.value for l in graph.links) == graph.stats.total_value_euros


def test_permutation_invariance():
    rng = random.Random(321)
    store = random_can_store(rng, 200, null_rate=0.15)
    row_ids = list(range(150))
    shuffled = row_ids[:]
    rng.shuffle(shuffled)
    a = build_sankey(store, row_ids)
    b = build_sankey(store, shuffled)
    assert a.authority_nodes == b.authority_nodes
    assert a.contractor_nodes == b.contractor_nodes
    assert a.links == b.links
    assert a.stats == b.stats
