"""Shared domain types, physical constants, and unit conversions.

Everything downstream (DDM handling, detectors, the scenario generator)
works in terms of the types defined here: a channel observation is one
PRN reflection at one epoch, an epoch record is one satellite's set of
up to four simultaneous channels, and a region is a latitude/longitude
box with longitudes kept in [0, 360).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SPEED_OF_LIGHT = 2.99792458e8  # m/s

PRN_CHIPS_PER_CODE = 1023
CODE_PERIOD_S = 1e-3
CHIP_DURATION_S = CODE_PERIOD_S / PRN_CHIPS_PER_CODE  # ~977.5 ns
CHIP_LENGTH_M = CHIP_DURATION_S * SPEED_OF_LIGHT  # ~293.05 m

DEFAULT_THRESHOLD_DB = 41.0
SAT_ALTITUDE_KM = 500.0  # nominal LEO altitude used in link-budget analysis
GROUND_SPEED_KM_S = 7.0  # nominal ground-track speed
EPOCH_INTERVAL_S = 0.5
PERSISTENCE_WINDOW_S = 10.0

MAX_SATELLITES = 8
MAX_CHANNELS = 4


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class InvalidObservationError(ToolkitError, ValueError):
    """An observation value is unusable (e.g. non-positive counts)."""


class ConfigError(ToolkitError, ValueError):
    """Invalid configuration (region bounds, detector settings, scenario specs)."""


class SequencingError(ToolkitError):
    """Input records or epoch bins arrived out of time order."""


class DataError(ToolkitError):
    """Structurally valid input that violates a data contract (duplicates, misalignment)."""


class RecordParseError(ToolkitError):
    """A record line failed to parse; carries position and field context."""

    def __init__(self, line_no: int, field_name: str, message: str):
        self.line_no = line_no
        self.field_name = field_name
        super().__init__(f"line {line_no}: field '{field_name}': {message}")


class SchemaError(ToolkitError):
    """A tabular input does not match the expected schema."""

    def __init__(self, column: str, message: str):
        self.column = column
        super().__init__(f"column '{column}': {message}")


def to_db(counts: float) -> float:
    """Convert raw power counts to dB (10*log10).

    Raises InvalidObservationError for counts <= 0; callers treat such
    channels as missing rather than mapping 0 to -inf.
    """
    if counts <= 0:
        raise InvalidObservationError(f"counts must be positive, got {counts}")
    return 10.0 * math.log10(counts)


def from_db(db: float) -> float:
    """Inverse of to_db: dB back to raw counts."""
    return 10.0 ** (db / 10.0)


def chip_units() -> tuple[float, float]:
    """Return (chip duration in seconds, chip length in meters)."""
    return CHIP_DURATION_S, CHIP_LENGTH_M


def normalize_lon(lon: float) -> float:
    """Normalize a longitude in degrees to the canonical [0, 360) range."""
    out = math.fmod(lon, 360.0)
    if out < 0.0:
        out += 360.0
    return out if out < 360.0 else 0.0


def quantize_epoch(t: float, interval: float = EPOCH_INTERVAL_S) -> float:
    """Snap a time to the nearest multiple of the epoch interval."""
    return round(t / interval) * interval


@dataclass(frozen=True)
class ChannelObservation:
    """One PRN reflection at one epoch.

    noise_floor_counts is the raw correlator count value; exactly 0 is a
    fill value marking a missing/invalid channel (never converted to dB).
    Longitudes are normalized to [0, 360) on construction.
    """

    prn_id: int
    sp_lat: float
    sp_lon: float
    noise_floor_counts: float
    quality_flags: int = 0

    def __post_init__(self):
        if self.prn_id <= 0:
            raise InvalidObservationError(f"prn_id must be positive, got {self.prn_id}")
        for name in ("sp_lat", "sp_lon", "noise_floor_counts"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidObservationError(f"{name} must be finite, got {getattr(self, name)}")
        if not -90.0 <= self.sp_lat <= 90.0:
            raise InvalidObservationError(f"sp_lat out of [-90, 90]: {self.sp_lat}")
        if self.noise_floor_counts < 0:
            raise InvalidObservationError(
                f"noise_floor_counts must be >= 0, got {self.noise_floor_counts}"
            )
        if not 0 <= self.quality_flags < 2**32:
            raise InvalidObservationError(
                f"quality_flags must fit in 32 bits, got {self.quality_flags}"
            )
        object.__setattr__(self, "sp_lon", normalize_lon(self.sp_lon))

    @property
    def is_valid(self) -> bool:
        """True when the channel carries a usable noise-floor value."""
        return self.noise_floor_counts > 0

    def has_flag_bit(self, bit: int) -> bool:
        return bool(self.quality_flags >> bit & 1)


@dataclass(frozen=True)
class EpochRecord:
    """One satellite's observations for one 0.5 s epoch (up to 4 channels)."""

    sat_id: int
    epoch_time: float  # seconds since the UTC origin, multiple of the epoch interval
    channels: tuple[ChannelObservation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.sat_id <= MAX_SATELLITES:
            raise InvalidObservationError(
                f"sat_id must be in [1, {MAX_SATELLITES}], got {self.sat_id}"
            )
        # bound so that half-second quantization stays exactly representable
        if not abs(self.epoch_time) < 1e15:
            raise InvalidObservationError(f"epoch_time out of range: {self.epoch_time}")
        channels = tuple(self.channels)
        if len(channels) > MAX_CHANNELS:
            raise InvalidObservationError(
                f"at most {MAX_CHANNELS} simultaneous channels, got {len(channels)}"
            )
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "epoch_time", quantize_epoch(self.epoch_time))

    def valid_channels(self) -> tuple[ChannelObservation, ...]:
        return tuple(ch for ch in self.channels if ch.is_valid)


@dataclass(frozen=True)
class Region:
    """Inclusive latitude/longitude box; longitudes canonical in [0, 360).

    Boxes crossing the antimeridian (lon_min > lon_max after
    normalization) are rejected.
    """

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self):
        for name in ("lat_min", "lat_max", "lon_min", "lon_max"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite, got {getattr(self, name)}")
        object.__setattr__(self, "lon_min", normalize_lon(self.lon_min))
        object.__setattr__(self, "lon_max", normalize_lon(self.lon_max))
        if self.lat_min > self.lat_max:
            raise ConfigError(f"lat_min {self.lat_min} > lat_max {self.lat_max}")
        if self.lon_min > self.lon_max:
            raise ConfigError(
                f"lon_min {self.lon_min} > lon_max {self.lon_max} "
                "(antimeridian-crossing boxes are not supported)"
            )

    def contains(self, lat: float, lon: float) -> bool:
        return region_contains(self, lat, lon)


def region_contains(region: Region, lat: float, lon: float) -> bool:
    """True iff (lat, lon) falls inside the box, bounds inclusive.

    The longitude is normalized to [0, 360) first, so inputs in
    [-180, 180) behave identically to their canonical form.
    """
    lon = normalize_lon(lon)
    return (
        region.lat_min <= lat <= region.lat_max
        and region.lon_min <= lon <= region.lon_max
    )
