"""Access-event data records and their append-only log files.

One record is one line of five space-separated fields:

    <tag> <HH:MM:SS> <AM|PM> <access> <D/M/YYYY>

e.g. "9806 09:15:51 AM pass 9/2/2012".  Times are 12-hour wall clock with
zero-padded fields; dates are day/month/year without zero padding; access is
lowercase.  Parsing tolerates repeated internal spaces, encoding is
canonical, and the two are exact inverses on their valid domains.
"""

import datetime as dt
import re
from dataclasses import dataclass
from enum import Enum

from .errors import RecordParseError
from .singulation import DEFAULT_TAG_WIDTH, TagId


class Access(Enum):
    PASS = "pass"
    DENY = "deny"


_TIME_RE = re.compile(r"^(\d{1,2}):(\d{2}):(\d{2})$")
_DATE_RE = re.compile(r"^(\d{1,2})/(\d{1,2})/(\d{4})$")


@dataclass(frozen=True)
class DataRecord:
    tag: TagId
    time: dt.time
    access: Access
    date: dt.date


def format_time(t: dt.time) -> str:
    """12-hour rendering with 2-digit fields, e.g. 09:15:51 AM."""
    meridiem = "AM" if t.hour < 12 else "PM"
    hour12 = t.hour % 12
    if hour12 == 0:
        hour12 = 12
    return f"{hour12:02d}:{t.minute:02d}:{t.second:02d} {meridiem}"


def format_date(d: dt.date) -> str:
    """Day/month/year without zero padding, e.g. 9/2/2012."""
    return f"{d.day}/{d.month}/{d.year}"


def parse_time(text: str, meridiem: str):
    """Parse "HH:MM:SS" plus "AM"/"PM" into a time, or None if invalid."""
    m = _TIME_RE.match(text)
    if not m or meridiem not in ("AM", "PM"):
        return None
    hour, minute, second = int(m.group(1)), int(m.group(2)), int(m.group(3))
    if not (1 <= hour <= 12 and minute <= 59 and second <= 59):
        return None
    hour %= 12
    if meridiem == "PM":
        hour += 12
    return dt.time(hour, minute, second)


def parse_date(text: str):
    """Parse "D/M/YYYY" into a date, or None if invalid."""
    m = _DATE_RE.match(text)
    if not m:
        return None
    day, month, year = int(m.group(1)), int(m.group(2)), int(m.group(3))
    try:
        return dt.date(year, month, day)
    except ValueError:
        return None


def encode_record(record: DataRecord) -> str:
    """One canonical line, single spaces, no trailing whitespace."""
    return (
        f"{record.tag.value} {format_time(record.time)} "
        f"{record.access.value} {format_date(record.date)}"
    )


def parse_record(line: str, line_no=None, width: int = DEFAULT_TAG_WIDTH) -> DataRecord:
    """Inverse of encode_record; lenient about repeated internal spaces.

    Raises RecordParseError naming the offending field (and line number when
    given).
    """
    fields = line.split()
    if len(fields) != 5:
        raise RecordParseError(
            f"expected 5 fields (tag time meridiem access date), got {len(fields)}",
            field="record", line_no=line_no,
        )
    tag_text, time_text, meridiem, access_text, date_text = fields

    if not tag_text.isdigit():
        raise RecordParseError(f"invalid tag {tag_text!r}", field="tag", line_no=line_no)
    value = int(tag_text)
    if value >= (1 << width):
        raise RecordParseError(
            f"tag {value} does not fit in {width} bits", field="tag", line_no=line_no
        )

    time = parse_time(time_text, meridiem)
    if time is None:
        raise RecordParseError(
            f"invalid time {time_text + ' ' + meridiem!r}", field="time", line_no=line_no
        )

    try:
        access = Access(access_text)
    except ValueError:
        raise RecordParseError(
            f"invalid access value {access_text!r}", field="access", line_no=line_no
        ) from None

    date = parse_date(date_text)
    if date is None:
        raise RecordParseError(
            f"invalid date {date_text!r}", field="date", line_no=line_no
        )

    return DataRecord(TagId(value, width), time, access, date)


def append_log(path, records) -> None:
    """Append encoded records, one per line; never rewrites existing bytes."""
    with open(path, "a", encoding="ascii", newline="") as f:
        for record in records:
            f.write(encode_record(record) + "\n")


def load_log(path, width: int = DEFAULT_TAG_WIDTH):
    """Read a record log, preserving file order.

    Raises RecordParseError naming the first malformed line.
    """
    records = []
    with open(path, "r", encoding="ascii", newline="") as f:
        for line_no, line in enumerate(f, start=1):
            records.append(parse_record(line, line_no=line_no, width=width))
    return records
