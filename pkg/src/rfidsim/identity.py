"""Employee registry, tag identification, and attendance reporting.

Access records carry only a tag number and "pass"; direction is inferred per
tag per day by alternation (first pass enters, second leaves, and so on).
Oddities in a log are flagged in the report rather than silently repaired:
the log order is never rewritten.
"""

import csv
import datetime as dt
import io
from dataclasses import dataclass

from .errors import ConfigurationError
from .records import DataRecord, format_date, format_time
from .singulation import DEFAULT_TAG_WIDTH, TagId

REGISTRY_HEADER = ["tag", "name", "building"]


@dataclass(frozen=True)
class Employee:
    tag: TagId
    name: str
    building: str

    def __post_init__(self):
        if not self.name:
            raise ConfigurationError("employee name must be non-empty")


class EmployeeRegistry:
    """Tag-to-person registry; tags are unique."""

    def __init__(self, employees=()):
        self._by_tag: dict[int, Employee] = {}
        for employee in employees:
            self.add(employee)

    def add(self, employee: Employee) -> None:
        if employee.tag.value in self._by_tag:
            raise ConfigurationError(f"duplicate registry tag {employee.tag.value}")
        self._by_tag[employee.tag.value] = employee

    def remove(self, tag_value: int) -> Employee:
        if tag_value not in self._by_tag:
            raise ConfigurationError(f"tag {tag_value} not in registry")
        return self._by_tag.pop(tag_value)

    def get(self, tag_value: int):
        return self._by_tag.get(tag_value)

    def __len__(self):
        return len(self._by_tag)

    def __contains__(self, tag_value: int):
        return tag_value in self._by_tag

    def __iter__(self):
        return iter(sorted(self._by_tag.values(), key=lambda e: e.tag.value))


def load_registry(path, width: int = DEFAULT_TAG_WIDTH) -> EmployeeRegistry:
    """Read a headered comma-separated registry file (tag,name,building)."""
    registry = EmployeeRegistry()
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != REGISTRY_HEADER:
            raise ConfigurationError(
                f"registry {path}: expected header {','.join(REGISTRY_HEADER)!r}"
            )
        for row_no, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ConfigurationError(f"registry {path} row {row_no}: expected 3 columns")
            tag_text, name, building = row
            if not tag_text.isdigit():
                raise ConfigurationError(f"registry {path} row {row_no}: invalid tag {tag_text!r}")
            registry.add(Employee(TagId(int(tag_text), width), name, building))
    return registry


def save_registry(path, registry: EmployeeRegistry) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(REGISTRY_HEADER)
        for employee in registry:
            writer.writerow([employee.tag.value, employee.name, employee.building])


@dataclass(frozen=True)
class IdentifiedRow:
    """A record joined with its registry entry: tag, name, date, time, building."""

    tag: TagId
    name: str
    date: dt.date
    time: dt.time
    building: str

    def render(self) -> str:
        return (
            f"{self.tag.value} {self.name} {format_date(self.date)} "
            f"{format_time(self.time)} {self.building}"
        )


def identify(record: DataRecord, registry: EmployeeRegistry):
    """Join one record with the registry; None for an unknown tag (never a made-up name)."""
    employee = registry.get(record.tag.value)
    if employee is None:
        return None
    return IdentifiedRow(record.tag, employee.name, record.date, record.time, employee.building)


@dataclass(frozen=True)
class Session:
    """One enter/leave interval; leave_time None while still open."""

    tag: TagId
    date: dt.date
    enter_time: dt.time
    leave_time: dt.time | None = None

    def __post_init__(self):
        if self.leave_time is not None and self.leave_time <= self.enter_time:
            raise ValueError("closed session requires leave_time > enter_time")

    @property
    def status(self) -> str:
        return "open" if self.leave_time is None else "closed"

    @property
    def duration(self):
        if self.leave_time is None:
            return None
        day = dt.date.min
        return dt.datetime.combine(day, self.leave_time) - dt.datetime.combine(day, self.enter_time)


def sessions(records) -> list[Session]:
    """Pair time-sorted same-tag same-date passes into sessions by alternation.

    Odd passes enter, even passes leave; a trailing unmatched enter stays
    open.  Callers must supply records for one tag on one date, sorted by
    time.
    """
    records = list(records)
    if not records:
        return []
    tag, date = records[0].tag, records[0].date
    previous = None
    for record in records:
        if record.tag != tag or record.date != date:
            raise ValueError("sessions() requires records of a single tag and date")
        if previous is not None and record.time < previous:
            raise ValueError("sessions() requires records sorted by time")
        previous = record.time
    out = []
    for i in range(0, len(records), 2):
        enter = records[i]
        if i + 1 < len(records):
            out.append(Session(tag, date, enter.time, records[i + 1].time))
        else:
            out.append(Session(tag, date, enter.time))
    return out


def format_duration(delta: dt.timedelta) -> str:
    total = int(delta.total_seconds())
    return f"{total // 3600}:{total % 3600 // 60:02d}:{total % 60:02d}"


@dataclass(frozen=True)
class AttendanceEntry:
    employee: Employee
    sessions: tuple[Session, ...]
    total_presence: dt.timedelta  # sum of closed-session durations
    flags: tuple[str, ...]


@dataclass(frozen=True)
class AttendanceReport:
    date: dt.date
    identified: tuple[IdentifiedRow, ...]   # known-tag records, in time order
    entries: tuple[AttendanceEntry, ...]    # per employee, ascending tag
    anomalies: tuple[str, ...]

    def render_text(self) -> str:
        lines = [f"Attendance report for {format_date(self.date)}", ""]
        lines.append("Identified records:")
        for row in self.identified:
            lines.append(f"  {row.render()}")
        if not self.identified:
            lines.append("  (none)")
        lines.append("")
        lines.append("Employees:")
        for entry in self.entries:
            e = entry.employee
            note = f" [{'; '.join(entry.flags)}]" if entry.flags else ""
            lines.append(
                f"  {e.tag.value} {e.name} ({e.building}): {len(entry.sessions)} session(s), "
                f"total {format_duration(entry.total_presence)}{note}"
            )
            for s in entry.sessions:
                if s.status == "closed":
                    lines.append(
                        f"    {format_time(s.enter_time)} -> {format_time(s.leave_time)} "
                        f"({format_duration(s.duration)})"
                    )
                else:
                    lines.append(f"    {format_time(s.enter_time)} -> (open)")
        if not self.entries:
            lines.append("  (none)")
        lines.append("")
        lines.append("Anomalies:")
        for anomaly in self.anomalies:
            lines.append(f"  {anomaly}")
        if not self.anomalies:
            lines.append("  (none)")
        return "\n".join(lines) + "\n"

    def render_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.identified:
            writer.writerow(
                ["record", row.tag.value, row.name, format_date(row.date),
                 format_time(row.time), row.building]
            )
        for entry in self.entries:
            e = entry.employee
            writer.writerow(
                ["employee", e.tag.value, e.name, e.building, len(entry.sessions),
                 format_duration(entry.total_presence), "; ".join(entry.flags)]
            )
            for s in entry.sessions:
                writer.writerow(
                    ["session", e.tag.value, format_date(s.date), format_time(s.enter_time),
                     format_time(s.leave_time) if s.leave_time else "",
                     format_duration(s.duration) if s.duration else "", s.status]
                )
        for anomaly in self.anomalies:
            writer.writerow(["anomaly", anomaly])
        return buf.getvalue()


def attendance_report(date: dt.date, records, registry: EmployeeRegistry) -> AttendanceReport:
    """Per-employee presence for one date, with anomalies flagged, never fixed.

    Sessions are paired on time-sorted records; the log order itself is
    checked for monotonicity and flagged when violated (it is not rewritten).
    Unknown tags and still-open sessions are report content, not errors.
    """
    day_records = [r for r in records if r.date == date]
    by_tag: dict[int, list[DataRecord]] = {}
    for record in day_records:
        by_tag.setdefault(record.tag.value, []).append(record)

    identified = []
    entries = []
    anomalies = []
    for tag_value in sorted(by_tag):
        tag_records = by_tag[tag_value]
        employee = registry.get(tag_value)
        times = [r.time for r in tag_records]
        monotone = times == sorted(times)
        if employee is None:
            n = len(tag_records)
            note = "" if monotone else "; non-monotone timestamps in log order"
            anomalies.append(f"unknown tag {tag_value} ({n} record{'s' if n != 1 else ''}{note})")
            continue
        flags = []
        if not monotone:
            flags.append("non-monotone timestamps in log order")
        ordered = sorted(tag_records, key=lambda r: r.time)
        deduped = [ordered[0]]
        for record in ordered[1:]:
            if record.time == deduped[-1].time:
                flags.append(f"duplicate timestamp {format_time(record.time)}")
            else:
                deduped.append(record)
        tag_sessions = sessions(deduped)
        if tag_sessions and tag_sessions[-1].status == "open":
            flags.append("open session (no matching leave)")
        total = sum(
            (s.duration for s in tag_sessions if s.duration is not None),
            dt.timedelta(),
        )
        identified.extend(identify(r, registry) for r in ordered)
        entries.append(
            AttendanceEntry(employee, tuple(tag_sessions), total, tuple(flags))
        )

    identified.sort(key=lambda row: (row.time, row.tag.value))
    return AttendanceReport(date, tuple(identified), tuple(entries), tuple(anomalies))
