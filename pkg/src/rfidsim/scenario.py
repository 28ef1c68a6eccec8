"""Scenario files: the flat key/value + tables format driving a simulation.

An INI-style file with one [scenario] section, one [reader:ID] section per
reader and one [employee:TAG] section per badge holder:

    [scenario]
    seed = 42
    tick = 0.1
    duration = 60.0
    bit_error_prob = 0.0
    dedup_window = 5.0
    bitrate = 64000.0
    tag_width = 16
    start = 9/2/2012 08:00:00 AM

    [reader:gate_a]
    ip_address = 192.168.1.20
    position = 0 0
    mode = continuous
    tx_power = 1.0
    antenna_gain = 4.0
    tag_power_threshold = 0.44
    backscatter_detect_threshold = 0.049
    carrier_freq = 865.7e6
    max_read_angle = 180
    medium = free_space
    attenuation = 1.0

    [employee:9806]
    name = Christos Vassilios
    building = 500Y
    waypoints = 0 10 0; 30 0 0; 60 10 0

Waypoints are "time x y" triples separated by semicolons; positions are
interpolated linearly between them and clamped outside.  Optional reader
keys: tdma_slot (fixed slot instead of automatic coloring) and poll_times
(space-separated seconds, required meaning only for polled mode).
canonical_scenario() renders a config back to this format deterministically.
"""

import configparser
import datetime as dt
from dataclasses import dataclass

from .errors import ConfigurationError
from .identity import Employee
from .readernet import DEFAULT_DEDUP_WINDOW, ReaderConfig, ReaderMode
from .records import format_date, format_time, parse_date, parse_time
from .rflink import (
    DEFAULT_CARRIER_FREQ_HZ,
    LinkParams,
    Medium,
    MediumKind,
)
from .singulation import DEFAULT_BITRATE, DEFAULT_TAG_WIDTH, TagId

DEFAULT_TICK = 0.1
DEFAULT_START = dt.datetime(2000, 1, 1, 0, 0, 0)

_READER_PREFIX = "reader:"
_EMPLOYEE_PREFIX = "employee:"


@dataclass(frozen=True)
class MovementSchedule:
    """Timestamped waypoints; position is linear between them, clamped outside."""

    waypoints: tuple[tuple[float, tuple[float, float]], ...]

    def __post_init__(self):
        if not self.waypoints:
            raise ConfigurationError("movement schedule needs at least one waypoint")
        times = [t for t, _ in self.waypoints]
        if any(t < 0 for t in times):
            raise ConfigurationError("waypoint timestamps must be >= 0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigurationError("waypoint timestamps must be strictly increasing")

    def position_at(self, t: float) -> tuple[float, float]:
        points = self.waypoints
        if t <= points[0][0]:
            return points[0][1]
        if t >= points[-1][0]:
            return points[-1][1]
        for (t0, (x0, y0)), (t1, (x1, y1)) in zip(points, points[1:]):
            if t0 <= t <= t1:
                f = (t - t0) / (t1 - t0)
                return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))
        raise AssertionError("unreachable: waypoints cover [first, last]")


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    duration: float
    readers: tuple[ReaderConfig, ...]
    employees: tuple[tuple[Employee, MovementSchedule], ...]
    tick: float = DEFAULT_TICK
    bit_error_prob: float = 0.0
    dedup_window: float = DEFAULT_DEDUP_WINDOW
    bitrate: float = DEFAULT_BITRATE
    tag_width: int = DEFAULT_TAG_WIDTH
    start: dt.datetime = DEFAULT_START

    def __post_init__(self):
        if not 0 <= self.seed < (1 << 64):
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        if self.tick <= 0:
            raise ConfigurationError(f"tick must be > 0, got {self.tick}")
        if self.duration < self.tick:
            raise ConfigurationError("duration must be at least one tick")
        if not 0.0 <= self.bit_error_prob < 1.0:
            raise ConfigurationError("bit_error_prob must be in [0, 1)")
        if self.dedup_window <= 0:
            raise ConfigurationError("dedup_window must be > 0")
        if self.bitrate <= 0:
            raise ConfigurationError("bitrate must be > 0")
        seen = set()
        for employee, schedule in self.employees:
            if employee.tag.width != self.tag_width:
                raise ConfigurationError(
                    f"employee tag {employee.tag.value} has width {employee.tag.width}, "
                    f"scenario uses {self.tag_width}"
                )
            if employee.tag.value in seen:
                raise ConfigurationError(f"duplicate employee tag {employee.tag.value}")
            seen.add(employee.tag.value)
            last = schedule.waypoints[-1][0]
            if last > self.duration:
                raise ConfigurationError(
                    f"employee tag {employee.tag.value}: waypoint at {last}s is past "
                    f"duration {self.duration}s"
                )


def _get(section, key, convert, where):
    if key not in section:
        raise ConfigurationError(f"{where}: missing key {key!r}")
    raw = section[key]
    try:
        return convert(raw)
    except (ValueError, ConfigurationError):
        raise ConfigurationError(f"{where}: invalid {key} value {raw!r}") from None


def _get_optional(section, key, convert, where, default):
    if key not in section or not section[key].strip():
        return default
    return _get(section, key, convert, where)


def _parse_position(raw: str) -> tuple[float, float]:
    parts = raw.split()
    if len(parts) != 2:
        raise ValueError(raw)
    return (float(parts[0]), float(parts[1]))


def _parse_waypoints(raw: str) -> MovementSchedule:
    points = []
    for chunk in raw.split(";"):
        parts = chunk.split()
        if len(parts) != 3:
            raise ValueError(chunk)
        points.append((float(parts[0]), (float(parts[1]), float(parts[2]))))
    return MovementSchedule(tuple(points))


def _parse_start(raw: str) -> dt.datetime:
    parts = raw.split()
    if len(parts) != 3:
        raise ValueError(raw)
    date = parse_date(parts[0])
    time = parse_time(parts[1], parts[2])
    if date is None or time is None:
        raise ValueError(raw)
    return dt.datetime.combine(date, time)


def _parse_poll_times(raw: str) -> tuple[float, ...]:
    return tuple(float(p) for p in raw.split())


def parse_scenario_text(text: str) -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigurationError(f"scenario: {e}") from None

    if "scenario" not in parser:
        raise ConfigurationError("scenario: missing [scenario] section")
    sc = parser["scenario"]
    where = "[scenario]"
    known = {"seed", "tick", "duration", "bit_error_prob", "dedup_window",
             "bitrate", "tag_width", "start"}
    for key in sc:
        if key not in known:
            raise ConfigurationError(f"{where}: unknown key {key!r}")
    seed = _get(sc, "seed", int, where)
    duration = _get(sc, "duration", float, where)
    tick = _get_optional(sc, "tick", float, where, DEFAULT_TICK)
    bit_error_prob = _get_optional(sc, "bit_error_prob", float, where, 0.0)
    dedup_window = _get_optional(sc, "dedup_window", float, where, DEFAULT_DEDUP_WINDOW)
    bitrate = _get_optional(sc, "bitrate", float, where, DEFAULT_BITRATE)
    tag_width = _get_optional(sc, "tag_width", int, where, DEFAULT_TAG_WIDTH)
    start = _get_optional(sc, "start", _parse_start, where, DEFAULT_START)

    readers = []
    employees = []
    for name in parser.sections():
        if name == "scenario":
            continue
        section = parser[name]
        where = f"[{name}]"
        if name.startswith(_READER_PREFIX):
            reader_id = name[len(_READER_PREFIX):]
            medium_kind = _get_optional(section, "medium", MediumKind, where,
                                        MediumKind.FREE_SPACE)
            attenuation = _get_optional(section, "attenuation", float, where, None)
            link = LinkParams(
                tx_power=_get(section, "tx_power", float, where),
                antenna_gain=_get(section, "antenna_gain", float, where),
                tag_power_threshold=_get(section, "tag_power_threshold", float, where),
                backscatter_detect_threshold=_get(
                    section, "backscatter_detect_threshold", float, where),
                carrier_freq=_get_optional(section, "carrier_freq", float, where,
                                           DEFAULT_CARRIER_FREQ_HZ),
                max_read_angle=_get_optional(section, "max_read_angle", float, where, 180.0),
            )
            readers.append(ReaderConfig(
                reader_id=reader_id,
                ip_address=_get(section, "ip_address", str, where),
                position=_get(section, "position", _parse_position, where),
                link=link,
                medium=Medium.of(medium_kind, attenuation),
                mode=_get_optional(section, "mode", ReaderMode, where, ReaderMode.CONTINUOUS),
                tdma_slot=_get_optional(section, "tdma_slot", int, where, None),
                poll_times=_get_optional(section, "poll_times", _parse_poll_times, where, ()),
            ))
        elif name.startswith(_EMPLOYEE_PREFIX):
            tag_text = name[len(_EMPLOYEE_PREFIX):]
            if not tag_text.isdigit():
                raise ConfigurationError(f"{where}: employee section needs a numeric tag")
            employee = Employee(
                tag=TagId(int(tag_text), tag_width),
                name=_get(section, "name", str, where),
                building=_get_optional(section, "building", str, where, ""),
            )
            employees.append((employee, _get(section, "waypoints", _parse_waypoints, where)))
        else:
            raise ConfigurationError(
                f"{where}: sections must be [scenario], [reader:ID] or [employee:TAG]"
            )

    return ScenarioConfig(
        seed=seed,
        duration=duration,
        readers=tuple(readers),
        employees=tuple(employees),
        tick=tick,
        bit_error_prob=bit_error_prob,
        dedup_window=dedup_window,
        bitrate=bitrate,
        tag_width=tag_width,
        start=start,
    )


def load_scenario(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as f:
        return parse_scenario_text(f.read())


def canonical_scenario(config: ScenarioConfig) -> str:
    """Deterministic round-trippable rendering of a scenario config."""
    lines = [
        "[scenario]",
        f"seed = {config.seed}",
        f"tick = {config.tick!r}",
        f"duration = {config.duration!r}",
        f"bit_error_prob = {config.bit_error_prob!r}",
        f"dedup_window = {config.dedup_window!r}",
        f"bitrate = {config.bitrate!r}",
        f"tag_width = {config.tag_width}",
        f"start = {format_date(config.start.date())} {format_time(config.start.time())}",
    ]
    for reader in sorted(config.readers, key=lambda r: r.reader_id):
        lines.append("")
        lines.append(f"[reader:{reader.reader_id}]")
        lines.append(f"ip_address = {reader.ip_address}")
        lines.append(f"position = {reader.position[0]!r} {reader.position[1]!r}")
        lines.append(f"mode = {reader.mode.value}")
        lines.append(f"tx_power = {reader.link.tx_power!r}")
        lines.append(f"antenna_gain = {reader.link.antenna_gain!r}")
        lines.append(f"tag_power_threshold = {reader.link.tag_power_threshold!r}")
        lines.append(
            f"backscatter_detect_threshold = {reader.link.backscatter_detect_threshold!r}"
        )
        lines.append(f"carrier_freq = {reader.link.carrier_freq!r}")
        lines.append(f"max_read_angle = {reader.link.max_read_angle!r}")
        lines.append(f"medium = {reader.medium.kind.value}")
        lines.append(f"attenuation = {reader.medium.attenuation_factor!r}")
        if reader.tdma_slot is not None:
            lines.append(f"tdma_slot = {reader.tdma_slot}")
        if reader.poll_times:
            lines.append(f"poll_times = {' '.join(repr(t) for t in reader.poll_times)}")
    for employee, schedule in sorted(config.employees, key=lambda e: e[0].tag.value):
        lines.append("")
        lines.append(f"[employee:{employee.tag.value}]")
        lines.append(f"name = {employee.name}")
        lines.append(f"building = {employee.building}")
        waypoints = "; ".join(
            f"{t!r} {x!r} {y!r}" for t, (x, y) in schedule.waypoints
        )
        lines.append(f"waypoints = {waypoints}")
    return "\n".join(lines) + "\n"
