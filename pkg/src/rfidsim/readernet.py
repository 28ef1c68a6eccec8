"""Reader deployment: coverage overlap, TDMA slots, cross-reader dedup.

Readers whose coverage disks intersect would jam each other, so they are
assigned distinct TDMA slots by greedy coloring.  Two readers still both see
a tag carried through their shared area; dedup keeps one record per pass by
suppressing repeat reads of a tag inside a time window.
"""

import ipaddress
import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigurationError
from .rflink import LinkParams, Medium, read_range


class ReaderMode(Enum):
    CONTINUOUS = "continuous"  # re-reports a tag every owned slot while in range
    POLLED = "polled"          # reads only when a poll request is pending

DEFAULT_DEDUP_WINDOW = 5.0  # seconds


@dataclass(frozen=True)
class ReaderConfig:
    """One reader's identity, placement, link parameters and schedule."""

    reader_id: str
    ip_address: str
    position: tuple[float, float]  # meters
    link: LinkParams
    medium: Medium
    mode: ReaderMode = ReaderMode.CONTINUOUS
    tdma_slot: int | None = None
    poll_times: tuple[float, ...] = ()  # polled mode: requested read times, seconds

    def __post_init__(self):
        if not self.reader_id:
            raise ConfigurationError("reader_id must be non-empty")
        try:
            ipaddress.IPv4Address(self.ip_address)
        except (ipaddress.AddressValueError, ValueError):
            raise ConfigurationError(
                f"reader {self.reader_id}: invalid IPv4 address {self.ip_address!r}"
            ) from None
        if self.tdma_slot is not None and self.tdma_slot < 0:
            raise ConfigurationError(f"reader {self.reader_id}: tdma_slot must be >= 0")
        if any(t < 0 for t in self.poll_times):
            raise ConfigurationError(f"reader {self.reader_id}: poll_times must be >= 0")

    @property
    def range(self) -> float:
        return read_range(self.link, self.medium)


@dataclass(frozen=True)
class OverlapGraph:
    """Readers as nodes; an edge joins every pair whose coverage disks intersect."""

    nodes: tuple[str, ...]               # sorted reader ids
    edges: frozenset[tuple[str, str]]    # each edge as a sorted id pair

    def neighbors(self, reader_id: str) -> set[str]:
        out = set()
        for a, b in self.edges:
            if a == reader_id:
                out.add(b)
            elif b == reader_id:
                out.add(a)
        return out

    def degree(self, reader_id: str) -> int:
        return len(self.neighbors(reader_id))

    def max_degree(self) -> int:
        return max((self.degree(n) for n in self.nodes), default=0)


def build_overlap_graph(readers) -> OverlapGraph:
    """Edge rule: distance between centers < sum of the two read ranges."""
    ids = [r.reader_id for r in readers]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ConfigurationError(f"duplicate reader_id(s): {', '.join(dupes)}")
    ranges = {r.reader_id: r.range for r in readers}
    edges = set()
    ordered = sorted(readers, key=lambda r: r.reader_id)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            d = math.dist(a.position, b.position)
            if d < ranges[a.reader_id] + ranges[b.reader_id]:
                edges.add((a.reader_id, b.reader_id))
    return OverlapGraph(tuple(r.reader_id for r in ordered), frozenset(edges))


def assign_slots(graph: OverlapGraph) -> dict[str, int]:
    """Greedy coloring in ascending reader_id order; adjacent readers differ.

    Slots start at 0; non-adjacent readers may share one.  Uses at most
    max_degree + 1 slots.
    """
    slots: dict[str, int] = {}
    for node in graph.nodes:
        taken = {slots[n] for n in graph.neighbors(node) if n in slots}
        slot = 0
        while slot in taken:
            slot += 1
        slots[node] = slot
    return slots


def dedup(reads, window: float = DEFAULT_DEDUP_WINDOW):
    """Collapse repeat reads of one tag, from any reader, into the first.

    Args:
        reads: (reader_id, TagId, timestamp) triples sorted by timestamp.
        window: seconds; a read at exactly last_kept + window is kept again.

    Returns:
        The kept subsequence of `reads`.
    """
    if window <= 0:
        raise ConfigurationError(f"dedup window must be > 0, got {window}")
    kept = []
    last_kept: dict = {}
    prev_ts = None
    for read in reads:
        _, tag, ts = read
        if prev_ts is not None and ts < prev_ts:
            raise ValueError(f"reads not sorted by timestamp ({ts} after {prev_ts})")
        prev_ts = ts
        last = last_kept.get(tag)
        if last is None or ts - last >= window:
            kept.append(read)
            last_kept[tag] = ts
    return kept
