"""Per-edge and batched streaming maintenance plus the sliding-window driver."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from tempobf import (
    CountVector,
    SlidingWindow,
    StreamOrderError,
    TemporalBipartiteGraph,
    TemporalEdge,
    batch_update,
    count_extreme,
    delta_count_edge,
    oracle_contains,
    oracle_count,
    run_sliding_window,
    sort_adjacency_by_time,
    stream_delete,
    stream_insert,
)
from conftest import F1, PROPERTY_SETTINGS, build_plain, build_priority, build_time

triples_strategy = st.lists(
    st.tuples(
        st.integers(0, 4).map("u{}".format),
        st.integers(0, 4).map("v{}".format),
        st.integers(0, 40),
    ),
    max_size=20,
)
delta_strategy = st.integers(0, 50)


def exact_counts(triples, delta):
    g, priority = build_priority(triples)
    return count_extreme(g, priority, delta)


class TestDeltaCountEdge:
    def test_every_wing_of_the_fixture_butterfly(self):
        g = build_time(F1)
        newest = g.edges()[3]
        oldest = g.edges()[0]
        assert delta_count_edge(g, 3, newest) == [0, 1, 0, 0, 0, 0]
        assert delta_count_edge(g, 3, oldest) == [0, 1, 0, 0, 0, 0]

    def test_isolated_pair_edge(self):
        g = build_time(F1 + (("u3", "v3", 2),))
        assert delta_count_edge(g, 3, g.edges()[4]) == [0] * 6

    def test_absent_edge_rejected(self):
        g = build_time(F1)
        with pytest.raises(ValueError, match="not in the graph"):
            delta_count_edge(g, 3, TemporalEdge(0, 0, 1, uid=99))

    def test_requires_time_layout(self):
        g = build_plain(F1)
        with pytest.raises(ValueError, match="time"):
            delta_count_edge(g, 3, g.edges()[0])

    @PROPERTY_SETTINGS
    @given(triples_strategy, delta_strategy)
    def test_agrees_with_membership_oracle(self, triples, delta):
        g = build_time(triples)
        for e in g.edges():
            assert delta_count_edge(g, delta, e) == oracle_contains(g, delta, e)


def _fill_fixture_edge_by_edge():
    g = TemporalBipartiteGraph()
    sort_adjacency_by_time(g)
    live = CountVector.zeros()
    inserted = []
    for i, (u, v, t) in enumerate(F1):
        inserted.append(stream_insert(g, 3, u, v, t, live))
        assert live == oracle_count(g, 3)
        assert live == ([0, 1, 0, 0, 0, 0] if i == 3 else [0] * 6)
    return g, live, inserted


class TestSingleEdgeStream:
    def test_insert_walkthrough_tracks_the_oracle(self):
        _fill_fixture_edge_by_edge()

    def test_delete_walkthrough_returns_to_zero(self):
        g, live, inserted = _fill_fixture_edge_by_edge()
        for e in inserted:
            stream_delete(g, 3, e, live)
            assert live == oracle_count(g, 3)
            assert all(c >= 0 for c in live)
        assert live == [0] * 6 and g.edge_count == 0

    def test_uninvolved_edge_changes_nothing(self):
        g = build_time(F1 + (("u3", "v3", 2),))
        live = oracle_count(g, 3).copy()
        stream_delete(g, 3, g.edges()[4], live)
        assert live == [0, 1, 0, 0, 0, 0]

    def test_delete_then_reinsert_restores(self):
        g = build_time(F1)
        live = CountVector([0, 1, 0, 0, 0, 0])
        victim = g.edges()[2]
        stream_delete(g, 3, victim, live)
        assert live == [0] * 6
        stream_insert(g, 3, "u2", "v1", 3, live)
        assert live == [0, 1, 0, 0, 0, 0]

    @PROPERTY_SETTINGS
    @given(triples_strategy, delta_strategy, st.integers(0, 2**32 - 1))
    def test_insert_then_delete_is_sign_symmetric(self, triples, delta, seed):
        g = build_time(triples)
        before = oracle_count(g, delta)
        live = before.copy()
        extra = [(f"u{i % 3}", f"v{i % 3}", 20 + i) for i in range(4)]
        records = [stream_insert(g, delta, u, v, t, live) for u, v, t in extra]
        random.Random(seed).shuffle(records)
        for e in records:
            stream_delete(g, delta, e, live)
        assert live == before


class TestBatchUpdate:
    def test_prefix_deletion_of_the_fixture(self):
        g = build_time(F1)
        live = CountVector([0, 1, 0, 0, 0, 0])
        stats: dict = {}
        deletions = g.edges()[:2]
        inserted = batch_update(g, 3, deletions, [], live, stats=stats)
        assert inserted == []
        assert live == [0] * 6
        assert stats["removed"] == [0, 1, 0, 0, 0, 0]
        assert stats["added"] == [0] * 6
        assert g.edge_count == 2

    def test_suffix_insertion_builds_the_fixture(self):
        g = TemporalBipartiteGraph()
        sort_adjacency_by_time(g)
        live = CountVector.zeros()
        stats: dict = {}
        inserted = batch_update(g, 3, [], list(F1), live, stats=stats)
        assert [(g.upper_tokens[e.u], g.lower_tokens[e.v], e.t) for e in inserted] == list(F1)
        assert live == [0, 1, 0, 0, 0, 0]
        assert stats["added"] == [0, 1, 0, 0, 0, 0]
        assert stats["removed"] == [0] * 6

    def test_empty_batches_change_nothing(self):
        g = build_time(F1)
        live = CountVector([0, 1, 0, 0, 0, 0])
        assert batch_update(g, 3, [], [], live) == []
        assert live == [0, 1, 0, 0, 0, 0]

    def test_worker_counts_agree(self):
        for workers in (1, 2, 4):
            g = build_time(F1)
            live = CountVector([0, 1, 0, 0, 0, 0])
            batch_update(g, 3, g.edges()[:2], [("u9", "v9", 9)], live, workers=workers)
            assert live == [0] * 6

    def test_full_drain_and_refill_round_trips(self):
        triples = sorted(F1 + (("u1", "v2", 6), ("u3", "v1", 7)), key=lambda e: e[2])
        g = build_time(triples)
        live = oracle_count(g, 4).copy()
        before = live.copy()
        batch_update(g, 4, g.edges(), [], live)
        assert live == [0] * 6 and g.edge_count == 0
        batch_update(g, 4, [], triples, live)
        assert live == before
        assert oracle_count(g, 4) == before

    def test_non_prefix_deletion_rejected(self):
        g = build_time(F1)
        with pytest.raises(ValueError, match="oldest-timestamp prefix"):
            batch_update(g, 3, [g.edges()[3]], [], CountVector.zeros())

    def test_non_suffix_insertion_rejected(self):
        g = build_time(F1)
        with pytest.raises(ValueError, match="newest-timestamp suffix"):
            batch_update(g, 3, [], [("u9", "v9", 0)], CountVector.zeros())

    def test_unordered_batches_rejected(self):
        g = build_time(F1)
        e0, e1 = g.edges()[:2]
        with pytest.raises(ValueError, match="deletion batch is not chronologically ordered"):
            batch_update(g, 3, [e1, e0], [], CountVector.zeros())
        with pytest.raises(ValueError, match="insertion batch is not chronologically ordered"):
            batch_update(g, 3, [], [("a", "x", 9), ("a", "y", 8)], CountVector.zeros())

    def test_absent_deletion_rejected(self):
        g = build_time(F1)
        with pytest.raises(ValueError, match="not in the graph"):
            batch_update(g, 3, [TemporalEdge(0, 0, 1, uid=50)], [], CountVector.zeros())

    def test_worker_count_validated(self):
        g = build_time(F1)
        with pytest.raises(ValueError, match="workers"):
            batch_update(g, 3, [], [], CountVector.zeros(), workers=0)

    @PROPERTY_SETTINGS
    @given(triples_strategy, delta_strategy, st.integers(0, 20))
    def test_removed_tally_counts_each_lost_butterfly_once(self, triples, delta, k):
        triples = sorted(triples, key=lambda e: e[2])
        g = build_time(triples)
        k = min(k, len(triples))
        before = oracle_count(g, delta)
        after_expected = oracle_count(build_plain(triples[k:]), delta)
        live = before.copy()
        stats: dict = {}
        batch_update(g, delta, g.edges()[:k], [], live, stats=stats)
        assert stats["removed"] == before - after_expected
        assert live == after_expected

    @PROPERTY_SETTINGS
    @given(triples_strategy, delta_strategy, st.integers(0, 20))
    def test_added_tally_counts_each_new_butterfly_once(self, triples, delta, k):
        triples = sorted(triples, key=lambda e: e[2])
        split = max(0, len(triples) - min(k, len(triples)))
        old, new = triples[:split], triples[split:]
        g = build_time(old)
        before = oracle_count(g, delta)
        live = before.copy()
        stats: dict = {}
        batch_update(g, delta, [], new, live, stats=stats)
        assert stats["added"] == oracle_count(build_plain(triples), delta) - before
        assert live == oracle_count(g, delta)


class TestSlidingWindow:
    def test_fixture_walkthrough(self):
        stream = list(F1) + [("u3", "v3", 5)]
        emissions = []
        run_sliding_window(stream, 3, window=4, stride=1, sink=lambda *a: emissions.append(a))
        counts = [list(c) for _, _, _, c in emissions]
        assert counts == [[0] * 6, [0] * 6, [0] * 6, [0, 1, 0, 0, 0, 0], [0] * 6]
        assert [(s, lo, hi) for s, lo, hi, _ in emissions] == [
            (0, 1, 1),
            (1, 1, 2),
            (2, 1, 3),
            (3, 1, 4),
            (4, 2, 5),
        ]

    def test_window_covering_the_whole_stream(self):
        emissions = []
        run_sliding_window(list(F1), 3, window=4, stride=4, sink=lambda *a: emissions.append(a))
        assert len(emissions) == 1
        assert emissions[0][3] == [0, 1, 0, 0, 0, 0]

    def test_tumbling_blocks_count_independently(self):
        second = [("u3", "v3", 11), ("u3", "v4", 12), ("u4", "v3", 13), ("u4", "v4", 14)]
        emissions = []
        run_sliding_window(list(F1) + second, 3, window=4, stride=4, sink=lambda *a: emissions.append(a))
        assert [c.counts for _, _, _, c in emissions] == [[0, 1, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]]

    def test_short_final_chunk_still_emits(self):
        stream = [("a", "x", t) for t in range(5)]
        emissions = []
        run_sliding_window(stream, 3, window=4, stride=2, sink=lambda *a: emissions.append(a))
        assert [s for s, _, _, _ in emissions] == [0, 1, 2]

    def test_unordered_stream_names_the_edge(self):
        stream = [("a", "x", 5), ("a", "y", 1)]
        with pytest.raises(StreamOrderError, match=r"edge \(a, y, 1\) arrived after an edge with timestamp 5"):
            run_sliding_window(stream, 3, window=4, stride=1)

    def test_parameter_validation(self):
        with pytest.raises(ValueError, match="stride"):
            SlidingWindow(3, window=4, stride=0)
        with pytest.raises(ValueError, match="window"):
            SlidingWindow(3, window=2, stride=3)
        with pytest.raises(ValueError, match="delta"):
            SlidingWindow(-1, window=4, stride=1)
        with pytest.raises(ValueError, match="engine"):
            run_sliding_window([], 3, window=4, stride=1, engine="fast")

    def test_sink_is_optional(self):
        run_sliding_window(list(F1), 3, window=2, stride=1)

    @pytest.mark.parametrize("engine,workers", [("stbc", 1), ("stbc+", 1), ("stbc+", 3)])
    def test_every_emission_matches_the_offline_count(self, engine, workers):
        rng = random.Random(1234)
        for _ in range(12):
            ne = rng.randint(0, 30)
            triples = sorted(
                (
                    (f"u{rng.randrange(5)}", f"v{rng.randrange(5)}", rng.randint(0, 40))
                    for _ in range(ne)
                ),
                key=lambda e: e[2],
            )
            delta = rng.randint(0, 30)
            window = rng.randint(1, 16)
            stride = rng.randint(1, window)
            emissions = []
            run_sliding_window(
                triples, delta, window, stride, engine=engine, workers=workers,
                sink=lambda *a: emissions.append(a),
            )
            for step, _, _, live in emissions:
                taken = min(len(triples), (step + 1) * stride)
                expected = exact_counts(triples[max(0, taken - window):taken], delta)
                assert live == expected
