"""Deterministic discrete-event world: badges moving past readers.

Time advances in fixed ticks; TDMA slots cycle one per tick.  In its owned
slot a reader powers and singulates every tag currently in range, each read
response is corrupted bit-by-bit at the configured error probability, and
reads whose checkword no longer verifies are discarded as misreads.  The
surviving read stream goes through cross-reader dedup and comes out as data
records.

Determinism contract: one seeded generator drives all corruption draws, and
everything iterates in a fixed order (readers by id, tags by value), so a
given config always produces byte-identical logs and manifests.
"""

import datetime as dt
import math
import random
from collections import deque
from dataclasses import dataclass

from .readernet import ReaderMode, assign_slots, build_overlap_graph, dedup
from .records import Access, DataRecord
from .rflink import backscatter_detectable, can_power_tag
from .scenario import ScenarioConfig, canonical_scenario
from .singulation import TagId, decode_with_check, encode_with_check, singulate
from .errors import ConfigurationError

_TIME_EPS = 1e-9


@dataclass(frozen=True)
class RawRead:
    """One reader's attempt to report one tag; check_ok=False reads never become records."""

    reader_id: str
    tag: TagId
    sim_time: float
    check_ok: bool


@dataclass(frozen=True)
class RunManifest:
    seed: int
    num_slots: int
    slots: tuple[tuple[str, int], ...]  # (reader_id, slot), ascending id
    raw_reads: int
    misreads: int
    check_ok_reads: int
    deduped: int
    records: int
    scenario_text: str  # canonicalized form of the executed config

    def render(self) -> str:
        lines = [
            f"seed: {self.seed}",
            f"slots_in_cycle: {self.num_slots}",
            "slot_map:",
        ]
        for reader_id, slot in self.slots:
            lines.append(f"  {reader_id}: {slot}")
        lines += [
            "counters:",
            f"  raw_reads: {self.raw_reads}",
            f"  misreads: {self.misreads}",
            f"  check_ok_reads: {self.check_ok_reads}",
            f"  deduped: {self.deduped}",
            f"  records: {self.records}",
            "scenario:",
        ]
        for line in self.scenario_text.splitlines():
            lines.append(f"  {line}" if line else "")
        return "\n".join(lines) + "\n"


def plan_slots(readers, graph) -> dict[str, int]:
    """TDMA slots for a deployment, honoring any fixed tdma_slot values.

    Fixed slots are validated (overlapping readers may not share one), then
    the remaining readers are greedily colored around them in ascending id
    order.  With no fixed slots this is exactly assign_slots().
    """
    fixed = {r.reader_id: r.tdma_slot for r in readers if r.tdma_slot is not None}
    if not fixed:
        return assign_slots(graph)
    slots = dict(fixed)
    for a, b in graph.edges:
        if a in fixed and b in fixed and fixed[a] == fixed[b]:
            raise ConfigurationError(
                f"overlapping readers {a} and {b} share fixed tdma_slot {fixed[a]}"
            )
    for node in graph.nodes:
        if node in slots:
            continue
        taken = {slots[n] for n in graph.neighbors(node) if n in slots}
        slot = 0
        while slot in taken:
            slot += 1
        slots[node] = slot
    return slots


class World:
    """Simulation state; step() advances one tick, run_raw() plays all of them."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.graph = build_overlap_graph(config.readers)
        self.slots = plan_slots(config.readers, self.graph)
        self.num_slots = max(self.slots.values(), default=0) + 1
        self.num_ticks = int(round(config.duration / config.tick))
        self.rng = random.Random(config.seed)
        self._readers = sorted(config.readers, key=lambda r: r.reader_id)
        self._movers = sorted(config.employees, key=lambda e: e[0].tag.value)
        self._busy_until = {r.reader_id: 0.0 for r in self._readers}
        self._polls = {r.reader_id: deque(sorted(r.poll_times)) for r in self._readers}

    def _in_range(self, reader, position) -> bool:
        d = max(math.dist(reader.position, position), _TIME_EPS)
        return can_power_tag(reader.link, reader.medium, d, 0.0) and backscatter_detectable(
            reader.link, reader.medium, d
        )

    def active_readers(self, tick_index: int):
        """Readers that perform an inventory in this tick (slot owned, not busy, polled)."""
        t = tick_index * self.config.tick
        current_slot = tick_index % self.num_slots
        active = []
        for reader in self._readers:
            if self.slots[reader.reader_id] != current_slot:
                continue
            if t < self._busy_until[reader.reader_id] - _TIME_EPS:
                continue
            if reader.mode is ReaderMode.POLLED:
                pending = self._polls[reader.reader_id]
                if not pending or pending[0] > t + _TIME_EPS:
                    continue
            active.append(reader)
        return active

    def step(self, tick_index: int) -> list[RawRead]:
        t = tick_index * self.config.tick
        p = self.config.bit_error_prob
        reads = []
        for reader in self.active_readers(tick_index):
            if reader.mode is ReaderMode.POLLED:
                self._polls[reader.reader_id].popleft()
            population = {
                employee.tag
                for employee, schedule in self._movers
                if self._in_range(reader, schedule.position_at(t))
            }
            order, stats = singulate(population, self.config.bitrate)
            if stats.modeled_airtime > self.config.tick:
                # Airtime exceeded the slot; the reader pays it off by
                # sitting out its next owned slots.
                self._busy_until[reader.reader_id] = t + stats.modeled_airtime
            for tag in order:
                if p > 0.0:
                    codeword = encode_with_check(tag)
                    corrupted = "".join(
                        ("1" if c == "0" else "0") if self.rng.random() < p else c
                        for c in codeword
                    )
                    # An undetected corruption (check passes on altered bits)
                    # still counts as a misread: phantom ids are never logged.
                    check_ok = decode_with_check(corrupted, tag.width) == tag
                else:
                    check_ok = True
                reads.append(RawRead(reader.reader_id, tag, t, check_ok))
        return reads

    def run_raw(self) -> list[RawRead]:
        reads = []
        for tick_index in range(self.num_ticks):
            reads.extend(self.step(tick_index))
        return reads


def run(config: ScenarioConfig):
    """Execute a scenario: (records sorted by time, run manifest)."""
    world = World(config)
    raw = world.run_raw()
    ok = [r for r in raw if r.check_ok]
    kept = dedup([(r.reader_id, r.tag, r.sim_time) for r in ok], config.dedup_window)

    records = []
    for _, tag, sim_time in kept:
        wall = config.start + dt.timedelta(seconds=math.floor(sim_time + _TIME_EPS))
        records.append(DataRecord(tag, wall.time(), Access.PASS, wall.date()))

    manifest = RunManifest(
        seed=config.seed,
        num_slots=world.num_slots,
        slots=tuple(sorted(world.slots.items())),
        raw_reads=len(raw),
        misreads=len(raw) - len(ok),
        check_ok_reads=len(ok),
        deduped=len(ok) - len(kept),
        records=len(records),
        scenario_text=canonical_scenario(config),
    )
    return records, manifest
