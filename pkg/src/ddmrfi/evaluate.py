"""Counting and comparison harness over detector outputs.

Produces the standard report set: per-day flag counts by method, totals
with percentages, hourly mean-vs-max noise-floor summaries, and
precision/recall/false-alarm scoring against simulator truth labels.

Counting unit matters and the natural unit is ambiguous, so every count
is emitted in both units: ``sat-epoch`` (one satellite at one epoch) and
``time`` (an epoch counts once if any satellite flagged it). Tables
label the unit explicitly.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Sequence, TextIO

from .core import DataError, EpochRecord, to_db
from .detect import FlagRecord
from .scenario import TruthLabel

METHODS = ("kurtosis", "mean", "raw_max", "proposed")

DAILY_CSV_HEADER = "date,method,count,unit"
SUMMARY_CSV_HEADER = "method,flagged,total,pct"
HOURLY_CSV_HEADER = "hour,mean_db,max_db"
SCORE_CSV_HEADER = "method,precision,recall,far"


def _method_value(flag: FlagRecord, method: str) -> bool:
    if method == "kurtosis":
        return flag.kurtosis_flag
    if method == "mean":
        return flag.mean_flag
    if method == "raw_max":
        return flag.raw_max_flag
    if method == "proposed":
        return flag.proposed_flag
    raise ValueError(f"unknown method '{method}'")


def _utc_date(epoch_time: float) -> str:
    return datetime.fromtimestamp(epoch_time, tz=timezone.utc).strftime("%Y-%m-%d")


def _utc_hour(epoch_time: float) -> str:
    return datetime.fromtimestamp(epoch_time, tz=timezone.utc).strftime("%Y-%m-%dT%H")


@dataclass(frozen=True)
class MethodCounts:
    method: str
    flagged: int
    total_epochs: int
    percentage: float  # flagged / total, in percent


def daily_counts(flags: Iterable[FlagRecord]) -> list[tuple[str, str, int, str]]:
    """Per-UTC-day flag counts: rows of (date, method, count, unit).

    Rows come out sorted by (date, method, unit) with both counting
    units present for every method and day observed.
    """
    sat_epoch: dict[tuple[str, str], int] = defaultdict(int)
    times_flagged: dict[tuple[str, str], set[float]] = defaultdict(set)
    days: set[str] = set()
    for flag in flags:
        day = _utc_date(flag.epoch_time)
        days.add(day)
        for method in METHODS:
            if _method_value(flag, method):
                sat_epoch[(day, method)] += 1
                times_flagged[(day, method)].add(flag.epoch_time)
    rows = []
    for day in sorted(days):
        for method in sorted(METHODS):
            rows.append((day, method, sat_epoch[(day, method)], "sat-epoch"))
            rows.append((day, method, len(times_flagged[(day, method)]), "time"))
    return rows


def summary(flags: Iterable[FlagRecord]) -> list[MethodCounts]:
    """Totals and percentages per method, in satellite-epoch units.

    total_epochs is the number of distinct (sat, epoch) pairs observed
    in the stream; runs are expected to be region-scoped upstream.
    """
    flags = list(flags)
    total = len({(f.sat_id, f.epoch_time) for f in flags})
    out = []
    for method in METHODS:
        flagged = sum(1 for f in flags if _method_value(f, method))
        pct = 100.0 * flagged / total if total else 0.0
        out.append(MethodCounts(method, flagged, total, pct))
    return out


def hourly_mean_max(records: Iterable[EpochRecord]) -> list[tuple[str, float, float]]:
    """Per UTC hour: time-average of per-epoch channel-mean and channel-max dB.

    Epochs with no valid channel are skipped; hours with no data are
    omitted entirely.
    """
    acc: dict[str, list[tuple[float, float]]] = defaultdict(list)
    for rec in records:
        channels = rec.valid_channels()
        if not channels:
            continue
        dbs = [to_db(ch.noise_floor_counts) for ch in channels]
        acc[_utc_hour(rec.epoch_time)].append((sum(dbs) / len(dbs), max(dbs)))
    rows = []
    for hour in sorted(acc):
        pairs = acc[hour]
        rows.append(
            (
                hour,
                sum(p[0] for p in pairs) / len(pairs),
                sum(p[1] for p in pairs) / len(pairs),
            )
        )
    return rows


def hourly_mean_max_from_flags(flags: Iterable[FlagRecord]) -> list[tuple[str, float, float]]:
    """Same table computed from FlagRecords' recorded per-epoch dB values."""
    acc: dict[str, list[tuple[float, float]]] = defaultdict(list)
    for flag in flags:
        if flag.mean_db is None or flag.max_db is None:
            continue
        acc[_utc_hour(flag.epoch_time)].append((flag.mean_db, flag.max_db))
    rows = []
    for hour in sorted(acc):
        pairs = acc[hour]
        rows.append(
            (
                hour,
                sum(p[0] for p in pairs) / len(pairs),
                sum(p[1] for p in pairs) / len(pairs),
            )
        )
    return rows


@dataclass(frozen=True)
class MethodScore:
    method: str
    precision: float
    recall: float
    false_alarm_rate: float


def score_against_truth(
    flags: Sequence[FlagRecord], truths: Sequence[TruthLabel]
) -> list[MethodScore]:
    """Confusion-matrix metrics per method at satellite-epoch granularity.

    The two streams must cover exactly the same (sat, epoch) keys.
    Zero-denominator metrics report 0.0.
    """
    truth_by_key = {(t.sat_id, t.epoch_time): t.jammed for t in truths}
    flag_keys = {(f.sat_id, f.epoch_time) for f in flags}
    if flag_keys != set(truth_by_key):
        missing = sorted(set(truth_by_key) - flag_keys)[:3]
        extra = sorted(flag_keys - set(truth_by_key))[:3]
        raise DataError(
            "flag and truth streams are misaligned "
            f"(missing from flags: {missing}, unmatched flags: {extra})"
        )
    scores = []
    for method in METHODS:
        tp = fp = fn = tn = 0
        for flag in flags:
            predicted = _method_value(flag, method)
            actual = truth_by_key[(flag.sat_id, flag.epoch_time)]
            if predicted and actual:
                tp += 1
            elif predicted:
                fp += 1
            elif actual:
                fn += 1
            else:
                tn += 1
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        far = fp / (fp + tn) if fp + tn else 0.0
        scores.append(MethodScore(method, precision, recall, far))
    return scores


def write_daily_csv(rows: Iterable[tuple[str, str, int, str]], stream: TextIO) -> None:
    stream.write(DAILY_CSV_HEADER + "\n")
    for date, method, count, unit in rows:
        stream.write(f"{date},{method},{count},{unit}\n")


def write_summary_csv(counts: Iterable[MethodCounts], stream: TextIO) -> None:
    """Percentages print with 0 decimals; the exact ratio is flagged/total."""
    stream.write(SUMMARY_CSV_HEADER + "\n")
    for mc in counts:
        stream.write(f"{mc.method},{mc.flagged},{mc.total_epochs},{mc.percentage:.0f}\n")


def write_hourly_csv(rows: Iterable[tuple[str, float, float]], stream: TextIO) -> None:
    stream.write(HOURLY_CSV_HEADER + "\n")
    for hour, mean_db, max_db in rows:
        stream.write(f"{hour},{mean_db:.3f},{max_db:.3f}\n")


def write_score_csv(scores: Iterable[MethodScore], stream: TextIO) -> None:
    stream.write(SCORE_CSV_HEADER + "\n")
    for sc in scores:
        stream.write(
            f"{sc.method},{sc.precision:.4f},{sc.recall:.4f},{sc.false_alarm_rate:.4f}\n"
        )
