import random

import pytest

from conftest import oracle_walk
from rfidsim.errors import ConfigurationError
from rfidsim.singulation import (
    CRC_BITS,
    DEFAULT_BITRATE,
    QUERY_OVERHEAD_BITS,
    ResponseKind,
    TagId,
    WALK_BACKENDS,
    query_prefix,
    singulate,
)

BACKENDS = sorted(WALK_BACKENDS)


class TestTagId:
    def test_bits_msb_first(self):
        assert TagId(0b0011, 4).bits() == "0011"
        assert TagId(9806, 16).bits() == format(9806, "016b")

    @pytest.mark.parametrize("value,width", [(16, 4), (-1, 4), (1, 0), (0, 129)])
    def test_invalid_rejected(self, value, width):
        with pytest.raises(ConfigurationError):
            TagId(value, width)

    def test_wide_tags_allowed(self):
        assert TagId((1 << 128) - 1, 128).bits() == "1" * 128


class TestQueryPrefix:
    def test_empty_population_is_silent(self):
        assert query_prefix(set(), "").kind is ResponseKind.SILENCE

    def test_unique_match_is_single(self):
        tag = TagId(0b0011, 4)
        response = query_prefix({tag}, "00")
        assert response.kind is ResponseKind.SINGLE
        assert response.tag == tag

    def test_two_matches_collide(self):
        population = {TagId(0b0000, 4), TagId(0b0001, 4)}
        assert query_prefix(population, "000").kind is ResponseKind.COLLISION

    def test_non_matching_prefix_is_silent(self):
        assert query_prefix({TagId(0b1111, 4)}, "0").kind is ResponseKind.SILENCE

    def test_mixed_widths_rejected(self):
        with pytest.raises(ConfigurationError):
            query_prefix({TagId(1, 4), TagId(1, 8)}, "0")

    def test_overlong_prefix_rejected(self):
        with pytest.raises(ValueError):
            query_prefix({TagId(1, 4)}, "00000")

    def test_non_binary_prefix_rejected(self):
        with pytest.raises(ValueError):
            query_prefix({TagId(1, 4)}, "0x")


@pytest.mark.parametrize("backend", BACKENDS)
class TestSingulate:
    def test_empty_population_one_query(self, backend):
        order, stats = singulate(set(), backend=backend)
        assert order == []
        assert stats.queries_issued == 1
        assert stats.tags_read == 0
        assert stats.bits_on_air == QUERY_OVERHEAD_BITS

    def test_three_tag_walk(self, backend):
        population = {TagId(0b00, 2), TagId(0b01, 2), TagId(0b10, 2)}
        order, stats = singulate(population, backend=backend)
        assert [t.value for t in order] == [0b00, 0b01, 0b10]
        assert stats.queries_issued == 6
        assert stats.tags_read == 3

    def test_matches_oracle_on_sampled_4bit_populations(self, backend):
        rng = random.Random(2024)
        for _ in range(1000):
            mask = rng.getrandbits(16)
            values = [v for v in range(16) if mask >> v & 1]
            order, stats = singulate({TagId(v, 4) for v in values}, backend=backend)
            expected_order, expected_queries, expected_bits = oracle_walk(
                values, 4, QUERY_OVERHEAD_BITS, 4 + CRC_BITS
            )
            assert [t.value for t in order] == expected_order
            assert stats.queries_issued == expected_queries
            assert stats.bits_on_air == expected_bits

    def test_reads_each_tag_once_ascending(self, backend):
        rng = random.Random(5)
        for _ in range(50):
            values = rng.sample(range(1 << 16), rng.randrange(0, 120))
            order, stats = singulate({TagId(v, 16) for v in values}, backend=backend)
            assert [t.value for t in order] == sorted(values)
            assert stats.tags_read == len(values)

    def test_query_count_bound(self, backend):
        rng = random.Random(6)
        for _ in range(50):
            n = rng.randrange(0, 60)
            values = rng.sample(range(1 << 12), n)
            _, stats = singulate({TagId(v, 12) for v in values}, backend=backend)
            assert stats.queries_issued <= 2 * n * 12 + 1

    def test_airtime_is_bits_over_bitrate(self, backend):
        population = {TagId(v, 8) for v in (3, 77, 200)}
        for bitrate in (250.0, 64_000.0, 1e6):
            _, stats = singulate(population, bitrate=bitrate, backend=backend)
            assert stats.modeled_airtime == stats.bits_on_air / bitrate

    def test_fifty_random_tags_under_a_second(self, backend):
        rng = random.Random(50)
        population = {TagId(v, 16) for v in rng.sample(range(1 << 16), 50)}
        order, stats = singulate(population, bitrate=DEFAULT_BITRATE, backend=backend)
        assert len(order) == 50
        assert stats.modeled_airtime < 1.0


class TestSingulateErrors:
    def test_non_positive_bitrate_rejected(self):
        with pytest.raises(ConfigurationError):
            singulate({TagId(1, 4)}, bitrate=0.0)

    def test_mixed_widths_rejected(self):
        with pytest.raises(ConfigurationError):
            singulate({TagId(1, 4), TagId(1, 5)})


def test_backends_agree_on_wider_tags():
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    rng = random.Random(9)
    for width in (1, 7, 16, 33, 62):
        values = rng.sample(range(1 << min(width, 48)), 25) if width > 4 else [0, 1]
        population = {TagId(v, width) for v in values}
        results = {
            backend: singulate(population, backend=backend) for backend in BACKENDS
        }
        orders = {b: [t.value for t in order] for b, (order, _) in results.items()}
        stats = {b: s for b, (_, s) in results.items()}
        assert len(set(map(tuple, orders.values()))) == 1
        assert len({(s.queries_issued, s.bits_on_air) for s in stats.values()}) == 1


def test_width_beyond_compiled_limit_falls_back():
    # 128-bit tags exceed the compiled kernel's uint64 bounds; the pure
    # fallback must take over transparently.
    population = {TagId(1 << 100, 128), TagId(3, 128)}
    order, stats = singulate(population)
    assert [t.value for t in order] == [3, 1 << 100]
    expected = oracle_walk([3, 1 << 100], 128, QUERY_OVERHEAD_BITS, 128 + CRC_BITS)
    assert stats.queries_issued == expected[1]
