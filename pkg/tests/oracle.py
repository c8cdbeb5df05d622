"""Independent brute-force reference implementations for the test suite.

Everything here recomputes results straight from definitions with the
dumbest viable code (explicit loops, full materialization), sharing no
logic with the streaming implementations it checks.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Sequence

from ddmrfi.core import EpochRecord
from ddmrfi.detect import (
    CAUSE_BOTH,
    CAUSE_CONCURRENT,
    CAUSE_NONE,
    CAUSE_PERSISTENT,
    DetectorConfig,
    FlagRecord,
)


def brute_noise_floor(power_rows: Sequence[Sequence[float]], sp_delay_idx: int) -> float:
    """Mean over enumerated forbidden-zone bins, plain accumulation."""
    total = 0.0
    count = 0
    for i in range(sp_delay_idx):
        for value in power_rows[i]:
            total += float(value)
            count += 1
    return total / count


def brute_detect(config: DetectorConfig, records: Sequence[EpochRecord]) -> list[FlagRecord]:
    """Materialized re-evaluation of all flag rules over the whole series."""
    by_time: dict[float, dict[int, EpochRecord]] = defaultdict(dict)
    for rec in records:
        assert rec.sat_id not in by_time[rec.epoch_time], "duplicate (sat, t)"
        by_time[rec.epoch_time][rec.sat_id] = rec
    times = sorted(by_time)

    region = config.region
    raw: dict[tuple[int, float], bool] = {}
    stats: dict[tuple[int, float], tuple] = {}
    for t in times:
        for sat, rec in by_time[t].items():
            channels = [ch for ch in rec.channels if ch.noise_floor_counts > 0]
            in_region = any(
                region.lat_min <= ch.sp_lat <= region.lat_max
                and region.lon_min <= ch.sp_lon <= region.lon_max
                for ch in channels
            )
            if channels:
                dbs = [10.0 * math.log10(ch.noise_floor_counts) for ch in channels]
                max_db = max(dbs)
                mean_db = sum(dbs) / len(dbs)
            else:
                max_db = mean_db = None
            r = max_db is not None and max_db > config.threshold_db and in_region
            mean_flag = (
                mean_db is not None and mean_db > config.threshold_db and in_region
            )
            kurt = in_region and any(
                (ch.quality_flags >> config.kurtosis_rfi_bit) & 1 for ch in channels
            )
            raw[(sat, t)] = r
            stats[(sat, t)] = (max_db, mean_db, mean_flag, kurt)

    window_bins = round(config.persistence_window_s / config.epoch_interval_s)
    out = []
    for t in times:
        n_flagged = sum(raw[(sat, t)] for sat in by_time[t])
        simul = n_flagged >= config.min_concurrent_sats
        for sat in sorted(by_time[t]):
            r = raw[(sat, t)]
            persist = all(
                raw.get((sat, t - k * config.epoch_interval_s), False)
                for k in range(window_bins + 1)
            )
            proposed = r and (simul or persist)
            if not proposed:
                cause = CAUSE_NONE
            elif simul and persist:
                cause = CAUSE_BOTH
            elif simul:
                cause = CAUSE_CONCURRENT
            else:
                cause = CAUSE_PERSISTENT
            max_db, mean_db, mean_flag, kurt = stats[(sat, t)]
            out.append(
                FlagRecord(
                    sat_id=sat,
                    epoch_time=t,
                    raw_max_flag=r,
                    mean_flag=mean_flag,
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
