"""Record-stream and region-config I/O.

The record wire format is NDJSON, one object per satellite-epoch::

    {"sat":3,"t":1746057600.0,"ch":[{"prn":12,"lat":33.1,"lon":253.2,
                                     "nf":12589.3,"qf":0}, ...]}

``t`` is UTC seconds since the Unix epoch, a multiple of 0.5; ``nf`` is
the raw noise-floor count value (dB is always derived downstream, so
the stored quantity stays closest to the instrument); ``qf`` is a
decimal unsigned 32-bit flag word. Line-oriented on purpose: streamable,
diff-able, and trivial for an external converter to produce from a real
Level-1 product. Canonical serialization fixes field order and uses
shortest round-trip decimals with LF endings, so write(parse(x)) is the
identity on canonical input and write(parse(.)) is idempotent otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator, TextIO

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .core import (
    ChannelObservation,
    ConfigError,
    EpochRecord,
    InvalidObservationError,
    MAX_CHANNELS,
    RecordParseError,
    Region,
    quantize_epoch,
)

REGION_PRESETS = {
    # Southwestern US box around the White Sands test range.
    "white-sands": Region(26.5, 39.0, 244.0, 264.0),
    # Middle East box with persistent, independently documented RFI.
    "middle-east": Region(29.0, 37.0, 34.0, 60.0),
}


@dataclass(frozen=True)
class ParseIssue:
    """One skipped line in lenient mode."""

    line_no: int
    field_name: str
    message: str


def _field(obj: dict, name: str, kinds, line_no: int, where: str):
    if name not in obj:
        raise RecordParseError(line_no, f"{where}{name}", "missing field")
    value = obj[name]
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise RecordParseError(
            line_no, f"{where}{name}", f"expected {kinds}, got {type(value).__name__}"
        )
    return value


def parse_record_line(line: str, line_no: int = 0) -> EpochRecord:
    """Parse one NDJSON record line; raises RecordParseError with position."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordParseError(line_no, "-", f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise RecordParseError(line_no, "-", "record must be a JSON object")
    unknown = set(obj) - {"sat", "t", "ch"}
    if unknown:
        raise RecordParseError(line_no, sorted(unknown)[0], "unknown field")
    sat = _field(obj, "sat", int, line_no, "")
    t = _field(obj, "t", (int, float), line_no, "")
    raw_channels = _field(obj, "ch", list, line_no, "")
    if len(raw_channels) > MAX_CHANNELS:
        raise RecordParseError(
            line_no, "ch", f"at most {MAX_CHANNELS} simultaneous channels, got {len(raw_channels)}"
        )
    channels = []
    for k, ch in enumerate(raw_channels):
        where = f"ch[{k}]."
        if not isinstance(ch, dict):
            raise RecordParseError(line_no, f"ch[{k}]", "channel must be a JSON object")
        unknown = set(ch) - {"prn", "lat", "lon", "nf", "qf"}
        if unknown:
            raise RecordParseError(line_no, where + sorted(unknown)[0], "unknown field")
        try:
            channels.append(
                ChannelObservation(
                    prn_id=_field(ch, "prn", int, line_no, where),
                    sp_lat=float(_field(ch, "lat", (int, float), line_no, where)),
                    sp_lon=float(_field(ch, "lon", (int, float), line_no, where)),
                    noise_floor_counts=float(_field(ch, "nf", (int, float), line_no, where)),
                    quality_flags=_field(ch, "qf", int, line_no, where),
                )
            )
        except InvalidObservationError as exc:
            raise RecordParseError(line_no, where.rstrip("."), str(exc)) from exc
    t = float(t)
    if not math.isfinite(t) or abs(t) >= 1e15:
        raise RecordParseError(line_no, "t", f"epoch time out of range: {t}")
    if t != quantize_epoch(t):
        raise RecordParseError(line_no, "t", f"{t} is not a multiple of 0.5 s")
    try:
        return EpochRecord(sat_id=sat, epoch_time=t, channels=tuple(channels))
    except InvalidObservationError as exc:
        raise RecordParseError(line_no, "sat", str(exc)) from exc


def parse_records(
    lines: Iterable[str],
    strict: bool = True,
    on_error: Callable[[ParseIssue], None] | None = None,
) -> Iterator[EpochRecord]:
    """Parse an NDJSON line stream into EpochRecords, in file order.

    strict (default): the first malformed line raises RecordParseError.
    lenient: malformed lines are skipped; each is reported through
    on_error with its line number and offending field. Blank lines are
    ignored in both modes.
    """
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield parse_record_line(line, line_no)
        except RecordParseError as exc:
            if strict:
                raise
            if on_error is not None:
                on_error(ParseIssue(exc.line_no, exc.field_name, str(exc)))


def read_records(
    path: str | Path,
    strict: bool = True,
    on_error: Callable[[ParseIssue], None] | None = None,
) -> list[EpochRecord]:
    with open(path, encoding="utf-8") as fh:
        return list(parse_records(fh, strict=strict, on_error=on_error))


def record_to_line(record: EpochRecord) -> str:
    """Canonical single-line serialization (no trailing newline)."""
    obj = {
        "sat": record.sat_id,
        "t": float(record.epoch_time),
        "ch": [
            {
                "prn": ch.prn_id,
                "lat": float(ch.sp_lat),
                "lon": float(ch.sp_lon),
                "nf": float(ch.noise_floor_counts),
                "qf": ch.quality_flags,
            }
            for ch in record.channels
        ],
    }
    return json.dumps(obj, separators=(",", ":"))


def write_records(records: Iterable[EpochRecord], stream: TextIO) -> None:
    for record in records:
        stream.write(record_to_line(record) + "\n")


def write_records_file(records: Iterable[EpochRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_records(records, fh)


def parse_region_toml(data: dict) -> Region:
    table = data.get("region", data)
    if not isinstance(table, dict):
        raise ConfigError("region config must be a TOML table")
    missing = [k for k in ("lat_min", "lat_max", "lon_min", "lon_max") if k not in table]
    if missing:
        raise ConfigError(f"region config missing keys: {', '.join(missing)}")
    return Region(
        lat_min=float(table["lat_min"]),
        lat_max=float(table["lat_max"]),
        lon_min=float(table["lon_min"]),
        lon_max=float(table["lon_max"]),
    )


def load_region(name_or_path: str | Path) -> Region:
    """Resolve a region: a named preset or a TOML file with the bounds."""
    if isinstance(name_or_path, str) and name_or_path in REGION_PRESETS:
        return REGION_PRESETS[name_or_path]
    path = Path(name_or_path)
    if not path.exists():
        known = ", ".join(sorted(REGION_PRESETS))
        raise ConfigError(
            f"region '{name_or_path}' is neither a preset ({known}) nor a file"
        )
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    return parse_region_toml(data)
