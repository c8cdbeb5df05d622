"""The three RFI detectors over epoch-record streams.

Per satellite-epoch, three statistics are evaluated against a dB
threshold inside a study region:

* raw max flag: highest of the (up to four) channel noise floors,
* mean flag: average of the channel noise floors (the baseline whose
  sensitivity suffers when only some channels are contaminated),
* kurtosis flag: a precomputed RFI bit carried in each channel's
  quality-flag word.

The raw max flag alone is deliberately trigger-happy, so a two-tier
verification gates the final ("proposed") flag: either at least
min_concurrent_sats satellites raise the max flag in the same epoch bin
(concurrence), or one satellite's max flag holds for every bin of a
backward-looking persistence window with no gaps (persistence).

The detector is a deterministic streaming state machine: feed it epoch
bins in increasing time order and it yields one FlagRecord per
satellite-epoch. A brute-force re-evaluation of the same rules over a
materialized series must match it bin for bin (the test suite enforces
this), so all windowing state lives in per-satellite run-length
counters rather than anything cleverer.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

from .core import (
    ConfigError,
    DataError,
    DEFAULT_THRESHOLD_DB,
    EPOCH_INTERVAL_S,
    EpochRecord,
    PERSISTENCE_WINDOW_S,
    Region,
    SchemaError,
    SequencingError,
    region_contains,
    to_db,
)

CAUSE_NONE = "none"
CAUSE_CONCURRENT = "concurrent"
CAUSE_PERSISTENT = "persistent"
CAUSE_BOTH = "both"

# Default bit index of the RFI bit inside quality_flags. Which bit the
# upstream product uses is version-dependent; treat as configuration.
DEFAULT_KURTOSIS_RFI_BIT = 2

FLAG_CSV_HEADER = (
    "epoch_time,sat,max_db,mean_db,raw_max,mean_flag,kurtosis_flag,"
    "simul,persist,proposed,cause"
)


@dataclass(frozen=True)
class DetectorConfig:
    region: Region
    threshold_db: float = DEFAULT_THRESHOLD_DB
    persistence_window_s: float = PERSISTENCE_WINDOW_S
    epoch_interval_s: float = EPOCH_INTERVAL_S
    min_concurrent_sats: int = 2
    kurtosis_rfi_bit: int = DEFAULT_KURTOSIS_RFI_BIT

    def __post_init__(self):
        if not math.isfinite(self.threshold_db):
            raise ConfigError(f"threshold_db must be finite, got {self.threshold_db}")
        if self.epoch_interval_s <= 0:
            raise ConfigError(
                f"epoch_interval_s must be > 0, got {self.epoch_interval_s}"
            )
        if self.persistence_window_s <= 0:
            raise ConfigError(
                f"persistence_window_s must be > 0, got {self.persistence_window_s}"
            )
        bins = round(self.persistence_window_s / self.epoch_interval_s)
        if bins < 1 or abs(bins * self.epoch_interval_s - self.persistence_window_s) > 1e-9:
            raise ConfigError(
                f"persistence_window_s {self.persistence_window_s} is not an exact "
                f"multiple of epoch_interval_s {self.epoch_interval_s}"
            )
        if self.min_concurrent_sats < 2:
            raise ConfigError(
                f"min_concurrent_sats must be >= 2, got {self.min_concurrent_sats}"
            )
        if not 0 <= self.kurtosis_rfi_bit < 32:
            raise ConfigError(
                f"kurtosis_rfi_bit must be in [0, 32), got {self.kurtosis_rfi_bit}"
            )

    @property
    def persistence_bins(self) -> int:
        """Consecutive flagged bins needed, both window endpoints inclusive."""
        return round(self.persistence_window_s / self.epoch_interval_s) + 1


@dataclass(frozen=True)
class FlagRecord:
    """Detector outputs for one satellite-epoch."""

    sat_id: int
    epoch_time: float
    raw_max_flag: bool
    mean_flag: bool
    kurtosis_flag: bool
    simul: bool
    persist: bool
    proposed_flag: bool
    cause: str
    max_db: float | None = None
    mean_db: float | None = None


def eval_location(config: DetectorConfig, record: EpochRecord) -> bool:
    """In-region indicator: any valid channel's specular point inside the box.

    Channels carry distinct specular points; the most sensitive reading
    (any channel in-region) is used so interference touching the region
    through any reflection path can flag. Zero valid channels -> False.
    """
    return any(
        region_contains(config.region, ch.sp_lat, ch.sp_lon)
        for ch in record.valid_channels()
    )


def eval_max_flag(
    config: DetectorConfig, record: EpochRecord
) -> tuple[bool, float | None]:
    """Raw max flag: strict threshold exceedance of the highest channel dB."""
    channels = record.valid_channels()
    if not channels:
        return False, None
    max_db = max(to_db(ch.noise_floor_counts) for ch in channels)
    return max_db > config.threshold_db and eval_location(config, record), max_db


def eval_mean_flag(
    config: DetectorConfig, record: EpochRecord
) -> tuple[bool, float | None]:
    """Mean flag over the valid channels (k-denominator when k < 4)."""
    channels = record.valid_channels()
    if not channels:
        return False, None
    mean_db = sum(to_db(ch.noise_floor_counts) for ch in channels) / len(channels)
    return mean_db > config.threshold_db and eval_location(config, record), mean_db


def eval_kurtosis_flag(config: DetectorConfig, record: EpochRecord) -> bool:
    """Any valid channel carrying the configured RFI quality bit, in-region."""
    return any(
        ch.has_flag_bit(config.kurtosis_rfi_bit) for ch in record.valid_channels()
    ) and eval_location(config, record)


class Detector:
    """Streaming detector state over epoch bins.

    Single-writer: step() mutates per-satellite run-length state and
    must see bins in strictly increasing time order.
    """

    def __init__(self, config: DetectorConfig):
        self.config = config
        self._last_bin: int | None = None
        # sat_id -> (bin index of last record, length of current all-flagged run)
        self._runs: dict[int, tuple[int, int]] = {}

    def _bin_index(self, epoch_time: float) -> int:
        ratio = epoch_time / self.config.epoch_interval_s
        idx = round(ratio)
        if abs(ratio - idx) > 1e-6:
            raise DataError(
                f"epoch_time {epoch_time} is not aligned to the "
                f"{self.config.epoch_interval_s} s epoch interval"
            )
        return idx

    def step(self, records: Sequence[EpochRecord]) -> list[FlagRecord]:
        """Process all records sharing one epoch time; returns flags by sat.

        Raises SequencingError for non-increasing bins and DataError for
        duplicate satellites or mixed epoch times within the bin.
        """
        if not records:
            return []
        t = records[0].epoch_time
        bin_idx = self._bin_index(t)
        if self._last_bin is not None and bin_idx <= self._last_bin:
            raise SequencingError(
                f"epoch bin at t={t} does not advance past the previous bin "
                f"(t={self._last_bin * self.config.epoch_interval_s})"
            )
        seen: set[int] = set()
        for rec in records:
            if rec.epoch_time != t:
                raise DataError(
                    f"bin at t={t} contains a record at t={rec.epoch_time}"
                )
            if rec.sat_id in seen:
                raise DataError(f"duplicate record for sat {rec.sat_id} at t={t}")
            seen.add(rec.sat_id)
        self._last_bin = bin_idx

        config = self.config
        evaluated = []
        n_flagged = 0
        for rec in sorted(records, key=lambda r: r.sat_id):
            raw, max_db = eval_max_flag(config, rec)
            mean, mean_db = eval_mean_flag(config, rec)
            kurt = eval_kurtosis_flag(config, rec)
            n_flagged += raw
            evaluated.append((rec, raw, max_db, mean, mean_db, kurt))

        simul = n_flagged >= config.min_concurrent_sats
        out = []
        for rec, raw, max_db, mean, mean_db, kurt in evaluated:
            prev = self._runs.get(rec.sat_id)
            if raw:
                # A gap (missing bin for this satellite) restarts the run.
                if prev is not None and prev[0] == bin_idx - 1:
                    run = prev[1] + 1
                else:
                    run = 1
            else:
                run = 0
            self._runs[rec.sat_id] = (bin_idx, run)
            persist = run >= config.persistence_bins
            proposed = raw and (simul or persist)
            if not proposed:
                cause = CAUSE_NONE
            elif simul and persist:
                cause = CAUSE_BOTH
            elif simul:
                cause = CAUSE_CONCURRENT
            else:
                cause = CAUSE_PERSISTENT
            out.append(
                FlagRecord(
                    sat_id=rec.sat_id,
                    epoch_time=rec.epoch_time,
                    raw_max_flag=raw,
                    mean_flag=mean,
                    kurtosis_flag=kurt,
                    simul=simul,
                    persist=persist,
                    proposed_flag=proposed,
                    cause=cause,
                    max_db=max_db,
                    mean_db=mean_db,
                )
            )
        return out

    def run(self, records: Iterable[EpochRecord]) -> Iterator[FlagRecord]:
        """Group a time-sorted record stream into bins and step through them."""
        pending: list[EpochRecord] = []
        for i, rec in enumerate(records):
            if pending and rec.epoch_time != pending[0].epoch_time:
                if rec.epoch_time < pending[0].epoch_time:
                    raise SequencingError(
                        f"record {i} (sat {rec.sat_id}, t={rec.epoch_time}) is "
                        f"earlier than the open bin at t={pending[0].epoch_time}"
                    )
                yield from self.step(pending)
                pending = []
            pending.append(rec)
        if pending:
            yield from self.step(pending)


def step_epoch_bin(
    detector: Detector, config: DetectorConfig, records: Sequence[EpochRecord]
) -> list[FlagRecord]:
    """Functional wrapper over Detector.step for one epoch bin."""
    if detector.config != config:
        raise ConfigError("detector was built with a different config")
    return detector.step(records)


def run_stream(
    config: DetectorConfig, records: Iterable[EpochRecord]
) -> Iterator[FlagRecord]:
    """Run the full detector over a time-sorted record stream."""
    return Detector(config).run(records)


def run_partitioned(
    config: DetectorConfig,
    records: Sequence[EpochRecord],
    n_partitions: int,
    max_workers: int | None = None,
) -> list[FlagRecord]:
    """Partitioned run: identical output to run_stream, computed in parallel.

    The time axis is split into n_partitions spans. Each partition is
    re-run with a lead-in of at least the persistence window so its
    windowing state matches the single-stream run, and lead-in outputs
    are dropped before merging; overlapping outputs therefore dedupe by
    construction.
    """
    if n_partitions < 1:
        raise ConfigError(f"n_partitions must be >= 1, got {n_partitions}")
    records = list(records)
    if not records or n_partitions == 1:
        return list(run_stream(config, records))

    times = sorted({rec.epoch_time for rec in records})
    bounds = [
        times[min(len(times) - 1, (k * len(times)) // n_partitions)]
        for k in range(1, n_partitions)
    ]
    spans = []
    lo = -math.inf
    for b in sorted(set(bounds)):
        spans.append((lo, b))
        lo = b
    spans.append((lo, math.inf))

    window = config.persistence_window_s

    def run_span(span: tuple[float, float]) -> list[FlagRecord]:
        lo, hi = span
        lead = lo - window if math.isfinite(lo) else -math.inf
        chunk = [r for r in records if lead <= r.epoch_time < hi]
        return [f for f in run_stream(config, chunk) if lo <= f.epoch_time < hi]

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        parts = list(pool.map(run_span, spans))
    return [flag for part in parts for flag in part]


def _fmt_db(value: float | None) -> str:
    return "" if value is None else f"{value:.3f}"


def write_flag_csv(
    flags: Iterable[FlagRecord],
    stream: TextIO,
    header_comment: str | None = None,
) -> None:
    """Write FlagRecords as CSV; booleans as 0/1, dB to 3 decimals, LF endings."""
    if header_comment is not None:
        stream.write(f"# {header_comment}\n")
    stream.write(FLAG_CSV_HEADER + "\n")
    for f in flags:
        stream.write(
            f"{f.epoch_time:.1f},{f.sat_id},{_fmt_db(f.max_db)},{_fmt_db(f.mean_db)},"
            f"{int(f.raw_max_flag)},{int(f.mean_flag)},{int(f.kurtosis_flag)},"
            f"{int(f.simul)},{int(f.persist)},{int(f.proposed_flag)},{f.cause}\n"
        )


def read_flag_csv(stream: TextIO) -> list[FlagRecord]:
    """Parse a FlagRecord CSV, skipping leading # comment lines.

    Raises SchemaError naming the first offending column when the header
    or a row does not match the fixed schema.
    """
    expected = FLAG_CSV_HEADER.split(",")
    lines = (line for line in stream if not line.startswith("#"))
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(expected[0], "empty input, header row missing") from None
    for want, got in zip(expected, header):
        if want != got:
            raise SchemaError(want, f"expected header column '{want}', found '{got}'")
    if len(header) < len(expected):
        raise SchemaError(expected[len(header)], "header column missing")
    if len(header) > len(expected):
        raise SchemaError(header[len(expected)], "unexpected extra header column")

    def parse_bool(name: str, raw: str) -> bool:
        if raw not in ("0", "1"):
            raise SchemaError(name, f"expected 0/1, found '{raw}'")
        return raw == "1"

    def parse_num(name: str, raw: str, kind):
        try:
            return kind(raw)
        except ValueError:
            raise SchemaError(name, f"expected a number, found '{raw}'") from None

    flags = []
    for row in reader:
        if len(row) != len(expected):
            raise SchemaError(expected[0], f"row has {len(row)} fields, expected {len(expected)}")
        t = parse_num("epoch_time", row[0], float)
        sat = parse_num("sat", row[1], int)
        flags.append(
            FlagRecord(
                sat_id=sat,
                epoch_time=t,
                max_db=parse_num("max_db", row[2], float) if row[2] else None,
                mean_db=parse_num("mean_db", row[3], float) if row[3] else None,
                raw_max_flag=parse_bool("raw_max", row[4]),
                mean_flag=parse_bool("mean_flag", row[5]),
                kurtosis_flag=parse_bool("kurtosis_flag", row[6]),
                simul=parse_bool("simul", row[7]),
                persist=parse_bool("persist", row[8]),
                proposed_flag=parse_bool("proposed", row[9]),
                cause=row[10],
            )
        )
    return flags
