"""Tree-walking anti-collision singulation and the tag codeword check.

A reader isolates tags by querying ever longer ID prefixes: tags answer only
when their most-significant bits match the queried prefix.  Collisions
descend (0-child before 1-child), a lone answer is read and acknowledged,
silence backtracks; a closing root query confirms the field is empty.  Every
tag in the field is read exactly once per round, in ascending ID order.

Tag responses carry an 8-bit CRC so corrupted reads are discarded instead of
logged.

Two interchangeable walk kernels exist: a compiled one (built from
_walk_cy.pyx) and a pure-Python fallback.  Selection happens at import;
set RFIDSIM_PURE_WALK=1 to force the fallback.
"""

import os
from dataclasses import dataclass
from enum import Enum

from . import _walk as _walk_py
from .errors import ConfigurationError, FramingError

try:
    from . import _walk_cy as _walk_compiled
except ImportError:
    _walk_compiled = None

DEFAULT_TAG_WIDTH = 16
DEFAULT_BITRATE = 64_000.0   # air-interface bits per second
QUERY_OVERHEAD_BITS = 16     # per-query framing cost on top of the prefix itself
CRC_BITS = 8
CRC_POLY = 0x07              # x^8 + x^2 + x + 1
_COMPILED_MAX_WIDTH = 62     # compiled kernel holds node bounds in uint64

WALK_BACKENDS = {"pure": _walk_py.walk}
if _walk_compiled is not None:
    WALK_BACKENDS["compiled"] = _walk_compiled.walk


def default_backend() -> str:
    if "compiled" in WALK_BACKENDS and not os.environ.get("RFIDSIM_PURE_WALK"):
        return "compiled"
    return "pure"


@dataclass(frozen=True)
class TagId:
    """Fixed-width tag identifier; prefix queries read bits MSB first."""

    value: int
    width: int = DEFAULT_TAG_WIDTH

    def __post_init__(self):
        if not 1 <= self.width <= 128:
            raise ConfigurationError(f"tag width must be in [1, 128], got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ConfigurationError(
                f"tag value {self.value} does not fit in {self.width} bits"
            )

    def bits(self) -> str:
        return format(self.value, f"0{self.width}b")

    def __str__(self):
        return str(self.value)


class ResponseKind(Enum):
    SILENCE = "silence"
    SINGLE = "single"
    COLLISION = "collision"


@dataclass(frozen=True)
class QueryResponse:
    kind: ResponseKind
    tag: TagId | None = None


@dataclass(frozen=True)
class SingulationStats:
    queries_issued: int
    bits_on_air: int
    tags_read: int
    modeled_airtime: float  # seconds; bits_on_air / bitrate


def _common_width(population) -> int | None:
    width = None
    for tag in population:
        if width is None:
            width = tag.width
        elif tag.width != width:
            raise ConfigurationError(
                f"population mixes tag widths {width} and {tag.width}"
            )
    return width


def query_prefix(population, prefix: str) -> QueryResponse:
    """One reader query: which tags' leading bits match `prefix`?"""
    width = _common_width(population)
    if any(c not in "01" for c in prefix):
        raise ValueError(f"prefix must be a bit-string, got {prefix!r}")
    if width is not None and len(prefix) > width:
        raise ValueError(f"prefix length {len(prefix)} exceeds tag width {width}")
    matches = [tag for tag in population if tag.bits().startswith(prefix)]
    if not matches:
        return QueryResponse(ResponseKind.SILENCE)
    if len(matches) == 1:
        return QueryResponse(ResponseKind.SINGLE, matches[0])
    return QueryResponse(ResponseKind.COLLISION)


def singulate(population, bitrate: float = DEFAULT_BITRATE, backend: str | None = None):
    """Read every tag in the field exactly once.

    Args:
        population: set (or iterable) of TagId sharing one width.
        bitrate: air-interface bits per second; converts bits to airtime.
        backend: walk kernel name from WALK_BACKENDS, or None for the default.

    Returns:
        (tags, stats): tags in the order read (ascending by value), and the
        query/airtime accounting for the round.
    """
    if bitrate <= 0:
        raise ConfigurationError(f"bitrate must be > 0, got {bitrate}")
    tags = set(population)
    width = _common_width(tags) or DEFAULT_TAG_WIDTH
    values = sorted(tag.value for tag in tags)

    name = backend if backend is not None else default_backend()
    kernel = WALK_BACKENDS[name]
    if kernel is not _walk_py.walk and width > _COMPILED_MAX_WIDTH:
        kernel = _walk_py.walk
    response_bits = width + CRC_BITS
    order, queries, bits = kernel(values, width, QUERY_OVERHEAD_BITS, response_bits)

    stats = SingulationStats(
        queries_issued=queries,
        bits_on_air=bits,
        tags_read=len(order),
        modeled_airtime=bits / bitrate,
    )
    return [TagId(v, width) for v in order], stats


def _crc8(bits: str) -> int:
    crc = 0
    for c in bits:
        feedback = ((crc >> 7) & 1) ^ (c == "1")
        crc = (crc << 1) & 0xFF
        if feedback:
            crc ^= CRC_POLY
    return crc


def encode_with_check(tag: TagId) -> str:
    """Tag bits followed by their 8-bit CRC; length = width + 8."""
    bits = tag.bits()
    return bits + format(_crc8(bits), "08b")


def decode_with_check(codeword: str, width: int) -> TagId | None:
    """Recompute the CRC; None means check failed (a discarded misread)."""
    if len(codeword) != width + CRC_BITS:
        raise FramingError(
            f"codeword length {len(codeword)} != width {width} + {CRC_BITS}"
        )
    if any(c not in "01" for c in codeword):
        raise ValueError(f"codeword must be a bit-string, got {codeword!r}")
    data, check = codeword[:width], codeword[width:]
    if _crc8(data) != int(check, 2):
        return None
    return TagId(int(data, 2), width)
