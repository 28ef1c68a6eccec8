"""Reader-to-tag RF link model.

Field strength decays with the inverse square of distance; the backscatter
return travels both legs, so the detectable return decays with the fourth
power.  All magnitudes are in consistent abstract units (thresholds are
expressed in the same unit as tx_power * antenna_gain / distance^2); no dBm
calibration is attempted.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigurationError

DEFAULT_CARRIER_FREQ_HZ = 865.7e6


class MediumKind(Enum):
    FREE_SPACE = "free_space"
    WATER_ADJACENT = "water_adjacent"
    METAL_ADJACENT = "metal_adjacent"


# Default attenuation multipliers. Water/metal proximity degrades the link;
# the exact factors are deployment configuration, not physics.
DEFAULT_ATTENUATION = {
    MediumKind.FREE_SPACE: 1.0,
    MediumKind.WATER_ADJACENT: 0.3,
    MediumKind.METAL_ADJACENT: 0.1,
}


@dataclass(frozen=True)
class Medium:
    """Propagation environment around the reader/tag pair.

    attenuation_factor multiplies the delivered power once per traversal of
    the medium; free space is exactly 1.0, impaired media are below 1.
    """

    kind: MediumKind
    attenuation_factor: float

    def __post_init__(self):
        if self.kind is MediumKind.FREE_SPACE:
            if self.attenuation_factor != 1.0:
                raise ConfigurationError("free_space medium must have attenuation_factor 1.0")
        elif not 0.0 < self.attenuation_factor < 1.0:
            raise ConfigurationError(
                f"{self.kind.value} medium needs attenuation_factor in (0, 1), "
                f"got {self.attenuation_factor}"
            )

    @classmethod
    def of(cls, kind, attenuation_factor=None):
        """Medium with the default attenuation for its kind unless overridden."""
        if isinstance(kind, str):
            kind = MediumKind(kind)
        if attenuation_factor is None:
            attenuation_factor = DEFAULT_ATTENUATION[kind]
        return cls(kind, attenuation_factor)


FREE_SPACE = Medium(MediumKind.FREE_SPACE, 1.0)


@dataclass(frozen=True)
class LinkParams:
    """Reader transmit side plus the two detection thresholds.

    tag_power_threshold is the minimum field strength at which a passive tag
    can power up; backscatter_detect_threshold is the minimum round-trip
    return the reader can still decode.  max_read_angle is the half-angle of
    the boresight cone inside which tags are readable, in degrees.
    """

    tx_power: float
    antenna_gain: float
    tag_power_threshold: float
    backscatter_detect_threshold: float
    carrier_freq: float = DEFAULT_CARRIER_FREQ_HZ
    max_read_angle: float = 180.0

    def __post_init__(self):
        if self.tx_power <= 0:
            raise ConfigurationError(f"tx_power must be > 0, got {self.tx_power}")
        if self.antenna_gain <= 0:
            raise ConfigurationError(f"antenna_gain must be > 0, got {self.antenna_gain}")
        if self.tag_power_threshold <= 0:
            raise ConfigurationError("tag_power_threshold must be > 0")
        if self.backscatter_detect_threshold <= 0:
            raise ConfigurationError("backscatter_detect_threshold must be > 0")
        if self.carrier_freq <= 0:
            raise ConfigurationError("carrier_freq must be > 0")
        if not 0.0 <= self.max_read_angle <= 180.0:
            raise ConfigurationError(
                f"max_read_angle must be in [0, 180], got {self.max_read_angle}"
            )


def field_strength(params: LinkParams, medium: Medium, distance: float) -> float:
    """Forward field strength at `distance` meters: P*G*a / d^2."""
    if distance <= 0:
        raise ValueError(f"distance must be > 0, got {distance}")
    return params.tx_power * params.antenna_gain * medium.attenuation_factor / (distance * distance)


def _boresight_offset(angle_deg: float) -> float:
    if not 0.0 <= angle_deg < 360.0:
        raise ValueError(f"angle must be in [0, 360), got {angle_deg}")
    return min(angle_deg, 360.0 - angle_deg)


def can_power_tag(params: LinkParams, medium: Medium, distance: float, angle_deg: float) -> bool:
    """True when the tag harvests enough field to power up.

    The tag must sit inside the reader's boresight cone (offset at most
    max_read_angle) and receive at least tag_power_threshold.  Threshold
    comparisons are inclusive.
    """
    offset = _boresight_offset(angle_deg)
    if offset > params.max_read_angle:
        return False
    return field_strength(params, medium, distance) >= params.tag_power_threshold


def backscatter_return(params: LinkParams, medium: Medium, distance: float) -> float:
    """Round-trip return signal: P*G*a^2 / d^4 (two cascaded inverse-square legs)."""
    if distance <= 0:
        raise ValueError(f"distance must be > 0, got {distance}")
    a = medium.attenuation_factor
    return params.tx_power * params.antenna_gain * a * a / distance**4


def backscatter_detectable(params: LinkParams, medium: Medium, distance: float) -> bool:
    """True when the modulated return is at or above the detect threshold."""
    return backscatter_return(params, medium, distance) >= params.backscatter_detect_threshold


def read_range(params: LinkParams, medium: Medium) -> float:
    """Largest distance at which a tag both powers up (at boresight) and is detectable.

    Closed form: min(sqrt(P*G*a / tag_threshold), (P*G*a^2 / detect_threshold)^(1/4)).
    """
    pg = params.tx_power * params.antenna_gain
    a = medium.attenuation_factor
    power_limit = math.sqrt(pg * a / params.tag_power_threshold)
    detect_limit = (pg * a * a / params.backscatter_detect_threshold) ** 0.25
    return min(power_limit, detect_limit)
