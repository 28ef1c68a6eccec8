import itertools
import random

import pytest

from conftest import oracle_dedup
from rfidsim.errors import ConfigurationError
from rfidsim.readernet import (
    OverlapGraph,
    ReaderConfig,
    ReaderMode,
    assign_slots,
    build_overlap_graph,
    dedup,
)
from rfidsim.rflink import FREE_SPACE, LinkParams
from rfidsim.singulation import TagId


def make_reader(reader_id, position, read_range=2.0, ip="10.0.0.1"):
    # P*G = 4, detect threshold picked so both limits land on read_range
    link = LinkParams(
        tx_power=1.0,
        antenna_gain=4.0,
        tag_power_threshold=4.0 / read_range**2,
        backscatter_detect_threshold=4.0 / read_range**4,
    )
    return ReaderConfig(reader_id, ip, position, link, FREE_SPACE)


class TestOverlapGraph:
    def test_single_reader_no_edges(self):
        graph = build_overlap_graph([make_reader("a", (0.0, 0.0))])
        assert graph.nodes == ("a",)
        assert not graph.edges

    def test_close_readers_overlap(self):
        graph = build_overlap_graph(
            [make_reader("a", (0.0, 0.0)), make_reader("b", (1.0, 0.0))]
        )
        assert graph.edges == frozenset({("a", "b")})

    def test_distant_readers_do_not_overlap(self):
        graph = build_overlap_graph(
            [make_reader("a", (0.0, 0.0)), make_reader("b", (10.0, 0.0))]
        )
        assert not graph.edges

    def test_touching_disks_do_not_overlap(self):
        # distance exactly equal to the range sum is not an intersection
        graph = build_overlap_graph(
            [make_reader("a", (0.0, 0.0)), make_reader("b", (4.0, 0.0))]
        )
        assert not graph.edges

    def test_duplicate_reader_ids_rejected(self):
        readers = [make_reader("a", (0.0, 0.0)), make_reader("a", (9.0, 0.0))]
        with pytest.raises(ConfigurationError):
            build_overlap_graph(readers)

    def test_bad_ip_rejected(self):
        with pytest.raises(ConfigurationError):
            make_reader("a", (0.0, 0.0), ip="999.1.2.3")
        with pytest.raises(ConfigurationError):
            make_reader("a", (0.0, 0.0), ip="not-an-ip")


def path_graph(*nodes):
    edges = frozenset(tuple(sorted(pair)) for pair in zip(nodes, nodes[1:]))
    return OverlapGraph(tuple(sorted(nodes)), edges)


class TestAssignSlots:
    def test_edgeless_graph_shares_slot_zero(self):
        graph = OverlapGraph(("a", "b", "c"), frozenset())
        assert assign_slots(graph) == {"a": 0, "b": 0, "c": 0}

    def test_single_edge_forces_two_slots(self):
        assert assign_slots(path_graph("a", "b")) == {"a": 0, "b": 1}

    def test_path_reuses_slot_zero(self):
        assert assign_slots(path_graph("a", "b", "c")) == {"a": 0, "b": 1, "c": 0}

    def test_path_coloring_is_minimal(self):
        # no proper coloring of a 3-node path uses fewer than 2 slots
        graph = path_graph("a", "b", "c")
        for coloring in itertools.product([0], repeat=3):
            assignment = dict(zip(graph.nodes, coloring))
            assert any(assignment[a] == assignment[b] for a, b in graph.edges)
        slots = assign_slots(graph)
        assert len(set(slots.values())) == 2

    def test_triangle_needs_three_slots(self):
        graph = OverlapGraph(
            ("a", "b", "c"), frozenset({("a", "b"), ("a", "c"), ("b", "c")})
        )
        assert assign_slots(graph) == {"a": 0, "b": 1, "c": 2}

    def test_random_graphs_properly_colored_within_bound(self):
        rng = random.Random(8)
        for _ in range(100):
            n = rng.randrange(1, 51)
            nodes = tuple(f"r{i:02d}" for i in range(n))
            edges = frozenset(
                tuple(sorted(pair))
                for pair in itertools.combinations(nodes, 2)
                if rng.random() < 0.15
            )
            graph = OverlapGraph(nodes, edges)
            slots = assign_slots(graph)
            for a, b in edges:
                assert slots[a] != slots[b]
            assert max(slots.values()) + 1 <= graph.max_degree() + 1


TAG = TagId(9806, 16)
OTHER = TagId(9027, 16)


class TestDedup:
    def test_second_reader_within_window_suppressed(self):
        reads = [("A", TAG, 0.0), ("B", TAG, 0.4)]
        assert dedup(reads, 2.0) == [("A", TAG, 0.0)]

    def test_boundary_at_exactly_window_kept(self):
        reads = [("A", TAG, 0.0), ("A", TAG, 2.0)]
        assert dedup(reads, 2.0) == reads

    def test_distinct_tags_independent(self):
        reads = [
            ("A", TAG, 0.0),
            ("A", OTHER, 0.1),
            ("B", TAG, 0.2),
            ("B", OTHER, 0.3),
            ("A", TAG, 6.0),
        ]
        assert dedup(reads, 5.0) == [
            ("A", TAG, 0.0),
            ("A", OTHER, 0.1),
            ("A", TAG, 6.0),
        ]

    def test_window_slides_from_last_kept_not_last_seen(self):
        # suppressed reads must not extend the suppression window
        reads = [("A", TAG, 0.0), ("A", TAG, 1.5), ("A", TAG, 2.5)]
        assert dedup(reads, 2.0) == [("A", TAG, 0.0), ("A", TAG, 2.5)]

    def test_unsorted_input_rejected(self):
        with pytest.raises(ValueError):
            dedup([("A", TAG, 1.0), ("A", TAG, 0.5)], 2.0)

    def test_non_positive_window_rejected(self):
        with pytest.raises(ConfigurationError):
            dedup([], 0.0)

    def _random_stream(self, rng):
        tags = [TagId(v, 16) for v in (1, 2, 3)]
        t = 0.0
        reads = []
        for _ in range(rng.randrange(0, 60)):
            t += rng.random() * 2.0
            reads.append((rng.choice("AB"), rng.choice(tags), round(t, 3)))
        return reads

    def test_matches_per_tag_replay_oracle(self):
        rng = random.Random(13)
        for _ in range(300):
            reads = self._random_stream(rng)
            window = rng.choice([0.5, 1.0, 3.0])
            assert dedup(reads, window) == oracle_dedup(reads, window)

    def test_idempotent_and_subsequence(self):
        rng = random.Random(14)
        for _ in range(200):
            reads = self._random_stream(rng)
            kept = dedup(reads, 1.0)
            assert dedup(kept, 1.0) == kept
            it = iter(reads)
            assert all(read in it for read in kept)  # subsequence, order preserved


def test_reader_mode_values():
    assert ReaderMode("continuous") is ReaderMode.CONTINUOUS
    assert ReaderMode("polled") is ReaderMode.POLLED
