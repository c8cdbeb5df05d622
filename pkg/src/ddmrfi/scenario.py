"""Ground-truth-labeled constellation and jammer simulator.

Satellites fly straight-line ground tracks on an equirectangular
lat/lon plane (km-per-degree fixed at each track's starting latitude).
Every half-second epoch produces four channels whose specular points
scatter around the sub-satellite point and whose noise floors are the
track baseline plus Gaussian jitter. An active ground jammer adds
interference power to the affected channels; the added power follows
the overpass link budget, dropping with the extra free-space path loss
at the jammer-to-satellite horizontal offset. Interference superposes
on the receiver noise in linear counts, never in dB.

Each satellite-epoch also gets a truth label: jammed means some jammer
was active at that epoch with the satellite inside the jammer's truth
horizon (the horizontal range where the added power is within a
configurable loss budget, 3 dB by default, of its overhead level).

Generation is deterministic for a seed. Each track draws from its own
child RNG stream keyed by (seed, sat_id), so tracks can be generated in
parallel, and switching a jammer on or off cannot perturb the noise of
unaffected channels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .core import (
    ChannelObservation,
    ConfigError,
    EPOCH_INTERVAL_S,
    EpochRecord,
    GROUND_SPEED_KM_S,
    RecordParseError,
    SAT_ALTITUDE_KM,
    from_db,
    normalize_lon,
    quantize_epoch,
)
from .geometry import OverpassGeometry, fspl_delta_db_at_distance, range_for_loss

SCENARIO_T0_UTC = 1746057600.0  # 2025-05-01T00:00:00Z
KM_PER_DEG_LAT = 111.195  # mean-earth meridian arc per degree

DEFAULT_BASELINE_FLOOR_DB = 37.0
DEFAULT_BASELINE_JITTER_DB = 0.8
DEFAULT_SP_SCATTER_KM = 30.0
DEFAULT_TRUTH_HORIZON_LOSS_DB = 3.0

GOLDEN_SEED = 20250501
GOLDEN_SCENARIO_NAMES = ("partial_channel", "concurrence", "spike")

ALL_CHANNELS = (1, 2, 3, 4)


@dataclass(frozen=True)
class JammerSpec:
    """A ground emitter: position, strength, schedule, and channel reach.

    power_offset_db is the interference level, in dB above the track
    baseline noise floor, that a satellite directly overhead (slant
    range = altitude) would observe. affected_channels models
    partial-channel contamination: only those channel positions (1-4)
    receive the added power.
    """

    lat: float
    lon: float
    power_offset_db: float
    active_intervals: tuple[tuple[float, float], ...]
    affected_channels: tuple[int, ...] = ALL_CHANNELS

    def __post_init__(self):
        object.__setattr__(self, "lon", normalize_lon(self.lon))
        intervals = tuple((float(s), float(e)) for s, e in self.active_intervals)
        for s, e in intervals:
            if s >= e:
                raise ConfigError(f"jammer interval [{s}, {e}) must have start < end")
        ordered = sorted(intervals)
        for (_, e1), (s2, _) in zip(ordered, ordered[1:]):
            if s2 < e1:
                raise ConfigError("jammer intervals must not overlap")
        object.__setattr__(self, "active_intervals", tuple(ordered))
        channels = tuple(sorted(set(self.affected_channels)))
        if not channels or any(c not in ALL_CHANNELS for c in channels):
            raise ConfigError(
                f"affected_channels must be a nonempty subset of {ALL_CHANNELS}"
            )
        object.__setattr__(self, "affected_channels", channels)

    def active_at(self, t_rel: float) -> bool:
        """Active on half-open intervals: start <= t < end."""
        return any(s <= t_rel < e for s, e in self.active_intervals)


@dataclass(frozen=True)
class TrackSpec:
    """One satellite's straight-line pass and noise baseline."""

    sat_id: int
    start_lat: float
    start_lon: float
    heading_deg: float  # clockwise from north
    t_start: float
    t_end: float
    ground_speed_km_s: float = GROUND_SPEED_KM_S
    altitude_km: float = SAT_ALTITUDE_KM
    baseline_floor_db: float = DEFAULT_BASELINE_FLOOR_DB
    baseline_jitter_db: float = DEFAULT_BASELINE_JITTER_DB

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ConfigError(f"t_end {self.t_end} must exceed t_start {self.t_start}")
        if self.ground_speed_km_s <= 0 or self.altitude_km <= 0:
            raise ConfigError("ground_speed_km_s and altitude_km must be > 0")
        if self.baseline_jitter_db < 0:
            raise ConfigError("baseline_jitter_db must be >= 0")
        object.__setattr__(self, "start_lon", normalize_lon(self.start_lon))

    def subsatellite(self, t_rel: float) -> tuple[float, float]:
        """Sub-satellite (lat, lon) at t_rel seconds from scenario start."""
        dist = self.ground_speed_km_s * (t_rel - self.t_start)
        heading = math.radians(self.heading_deg)
        lat = self.start_lat + dist * math.cos(heading) / KM_PER_DEG_LAT
        km_per_deg_lon = KM_PER_DEG_LAT * math.cos(math.radians(self.start_lat))
        lon = self.start_lon + dist * math.sin(heading) / km_per_deg_lon
        return lat, normalize_lon(lon)


@dataclass(frozen=True)
class TruthLabel:
    sat_id: int
    epoch_time: float
    jammed: bool


@dataclass(frozen=True)
class Scenario:
    """A complete simulation description (what the TOML files carry)."""

    name: str
    tracks: tuple[TrackSpec, ...]
    jammers: tuple[JammerSpec, ...]
    seed: int = GOLDEN_SEED
    t0_utc: float = SCENARIO_T0_UTC
    epoch_interval_s: float = EPOCH_INTERVAL_S
    sp_scatter_km: float = DEFAULT_SP_SCATTER_KM
    truth_horizon_loss_db: float = DEFAULT_TRUTH_HORIZON_LOSS_DB


def _horizontal_km(lat: float, lon: float, jammer: JammerSpec) -> float:
    """Equirectangular ground distance (km) from a point to the jammer."""
    dlat_km = (lat - jammer.lat) * KM_PER_DEG_LAT
    dlon = math.fmod(lon - jammer.lon + 540.0, 360.0) - 180.0
    dlon_km = dlon * KM_PER_DEG_LAT * math.cos(math.radians(jammer.lat))
    return math.hypot(dlat_km, dlon_km)


def generate(
    tracks: Sequence[TrackSpec],
    jammers: Sequence[JammerSpec],
    rng_seed: int,
    epoch_interval_s: float = EPOCH_INTERVAL_S,
    t0_utc: float = SCENARIO_T0_UTC,
    sp_scatter_km: float = DEFAULT_SP_SCATTER_KM,
    truth_horizon_loss_db: float = DEFAULT_TRUTH_HORIZON_LOSS_DB,
) -> tuple[list[EpochRecord], list[TruthLabel]]:
    """Simulate all tracks and return (records, truth labels), time-ordered.

    Per track and epoch: four channels with specular points scattered
    uniformly within sp_scatter_km of the sub-satellite point, noise
    floors at baseline + jitter, and each active jammer's contribution
    added in linear counts to its affected channel positions. The truth
    label is per satellite-epoch, independent of which channels a
    jammer touches.
    """
    sat_ids = [tr.sat_id for tr in tracks]
    if len(set(sat_ids)) != len(sat_ids):
        raise ConfigError("track sat_ids must be unique within one scenario")

    records: list[EpochRecord] = []
    truths: list[TruthLabel] = []
    for track in tracks:
        rng = np.random.default_rng([rng_seed, track.sat_id])
        n_epochs = round((track.t_end - track.t_start) / epoch_interval_s)
        prns = rng.choice(np.arange(1, 33), size=4, replace=False)
        jitter = rng.standard_normal((n_epochs, 4))
        scatter_r = sp_scatter_km * np.sqrt(rng.random((n_epochs, 4)))
        scatter_th = rng.random((n_epochs, 4)) * (2.0 * math.pi)

        geom = OverpassGeometry(track.altitude_km, track.ground_speed_km_s)
        horizon_km = range_for_loss(geom, truth_horizon_loss_db).horizontal_km
        km_per_deg_lon = KM_PER_DEG_LAT * math.cos(math.radians(track.start_lat))

        for k in range(n_epochs):
            t_rel = track.t_start + k * epoch_interval_s
            sub_lat, sub_lon = track.subsatellite(t_rel)

            jam_counts = [0.0, 0.0, 0.0, 0.0]
            jammed = False
            for jam in jammers:
                if not jam.active_at(t_rel):
                    continue
                dist = _horizontal_km(sub_lat, sub_lon, jam)
                if dist <= horizon_km:
                    jammed = True
                contrib_db = (
                    track.baseline_floor_db
                    + jam.power_offset_db
                    - fspl_delta_db_at_distance(geom, dist)
                )
                for pos in jam.affected_channels:
                    jam_counts[pos - 1] += from_db(contrib_db)

            channels = []
            for c in range(4):
                noise_db = track.baseline_floor_db + track.baseline_jitter_db * jitter[k, c]
                counts = from_db(noise_db) + jam_counts[c]
                sp_lat = sub_lat + scatter_r[k, c] * math.cos(scatter_th[k, c]) / KM_PER_DEG_LAT
                sp_lon = sub_lon + scatter_r[k, c] * math.sin(scatter_th[k, c]) / km_per_deg_lon
                channels.append(
                    ChannelObservation(
                        prn_id=int(prns[c]),
                        sp_lat=sp_lat,
                        sp_lon=sp_lon,
                        noise_floor_counts=counts,
                    )
                )
            epoch_time = quantize_epoch(t0_utc + t_rel, epoch_interval_s)
            records.append(
                EpochRecord(sat_id=track.sat_id, epoch_time=epoch_time, channels=tuple(channels))
            )
            truths.append(TruthLabel(track.sat_id, epoch_time, jammed))

    order = lambda item: (item.epoch_time, item.sat_id)  # noqa: E731
    records.sort(key=order)
    truths.sort(key=order)
    return records, truths


def generate_scenario(sc: Scenario, seed: int | None = None):
    return generate(
        sc.tracks,
        sc.jammers,
        sc.seed if seed is None else seed,
        epoch_interval_s=sc.epoch_interval_s,
        t0_utc=sc.t0_utc,
        sp_scatter_km=sc.sp_scatter_km,
        truth_horizon_loss_db=sc.truth_horizon_loss_db,
    )


def write_truth(labels: Iterable[TruthLabel], stream: TextIO) -> None:
    """Truth labels as NDJSON: {"sat":s,"t":epoch,"jam":0|1}."""
    for lab in labels:
        stream.write(
            json.dumps(
                {"sat": lab.sat_id, "t": float(lab.epoch_time), "jam": int(lab.jammed)},
                separators=(",", ":"),
            )
            + "\n"
        )


def read_truth(stream: Iterable[str]) -> list[TruthLabel]:
    labels = []
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            labels.append(
                TruthLabel(int(obj["sat"]), float(obj["t"]), bool(obj["jam"]))
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise RecordParseError(line_no, "-", f"bad truth line: {exc}") from exc
    return labels


def _spec_table(table: dict, cls, line: str):
    try:
        return cls(**table)
    except TypeError as exc:
        raise ConfigError(f"bad {line} table: {exc}") from exc


def parse_scenario_toml(data: dict, name_hint: str = "scenario") -> Scenario:
    meta = data.get("scenario", {})
    tracks = []
    for raw in data.get("track", []):
        tracks.append(_spec_table(dict(raw), TrackSpec, "[[track]]"))
    jammers = []
    for raw in data.get("jammer", []):
        raw = dict(raw)
        intervals = raw.pop("active", [])
        affected = raw.pop("affected_channels", "all")
        if affected == "all":
            affected = ALL_CHANNELS
        raw["active_intervals"] = tuple(tuple(pair) for pair in intervals)
        raw["affected_channels"] = tuple(affected)
        jammers.append(_spec_table(raw, JammerSpec, "[[jammer]]"))
    if not tracks:
        raise ConfigError("scenario defines no [[track]] tables")
    return Scenario(
        name=str(meta.get("name", name_hint)),
        tracks=tuple(tracks),
        jammers=tuple(jammers),
        seed=int(meta.get("seed", GOLDEN_SEED)),
        t0_utc=float(meta.get("t0_utc", SCENARIO_T0_UTC)),
        epoch_interval_s=float(meta.get("epoch_interval", EPOCH_INTERVAL_S)),
        sp_scatter_km=float(meta.get("sp_scatter_km", DEFAULT_SP_SCATTER_KM)),
        truth_horizon_loss_db=float(
            meta.get("truth_horizon_loss_db", DEFAULT_TRUTH_HORIZON_LOSS_DB)
        ),
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    return parse_scenario_toml(data, name_hint=path.stem)


def golden_scenarios() -> dict[str, Scenario]:
    """The three scripted acceptance scenarios, built in code.

    partial_channel: two parallel passes over a moderate jammer that
    contaminates only channel 1, active for 100 s while both satellites
    are inside its truth horizon. The max-based path sees ~47 dB on the
    hot channel while the 4-channel mean stays near 39.6 dB.

    concurrence: two satellites near a strong all-channel jammer that
    fires for exactly one epoch, so both flag the same bin with no
    persistence history.

    spike: one satellite, one single-epoch burst; the raw max flag
    trips once and the two-tier verification suppresses it.
    """
    partial = Scenario(
        name="partial_channel",
        tracks=(
            TrackSpec(sat_id=1, start_lat=32.4, start_lon=246.0, heading_deg=90.0,
                      t_start=0.0, t_end=240.0, baseline_jitter_db=0.5),
            TrackSpec(sat_id=2, start_lat=32.6, start_lon=246.0, heading_deg=90.0,
                      t_start=0.0, t_end=240.0, baseline_jitter_db=0.5),
        ),
        jammers=(
            JammerSpec(lat=32.5, lon=254.0, power_offset_db=10.0,
                       active_intervals=((60.0, 160.0),), affected_channels=(1,)),
        ),
    )
    concurrence = Scenario(
        name="concurrence",
        tracks=(
            TrackSpec(sat_id=3, start_lat=33.0, start_lon=250.0, heading_deg=90.0,
                      t_start=0.0, t_end=60.0, baseline_jitter_db=0.5),
            TrackSpec(sat_id=4, start_lat=33.2, start_lon=250.3, heading_deg=90.0,
                      t_start=0.0, t_end=60.0, baseline_jitter_db=0.5),
        ),
        jammers=(
            JammerSpec(lat=33.1, lon=252.0, power_offset_db=18.0,
                       active_intervals=((30.0, 30.5),)),
        ),
    )
    spike = Scenario(
        name="spike",
        tracks=(
            TrackSpec(sat_id=5, start_lat=34.0, start_lon=250.0, heading_deg=90.0,
                      t_start=0.0, t_end=60.0, baseline_jitter_db=0.5),
        ),
        jammers=(
            JammerSpec(lat=34.05, lon=251.5, power_offset_db=15.0,
                       active_intervals=((20.0, 20.5),)),
        ),
    )
    return {sc.name: sc for sc in (partial, concurrence, spike)}


def golden_fixture(out_dir: str | Path, seed: int = GOLDEN_SEED) -> dict[str, dict[str, Path]]:
    """Write the canonical fixture files; byte-reproducible for a seed.

    For each scenario, <name>.records.ndjson and <name>.truth.ndjson
    land in out_dir. Returns {scenario: {"records": path, "truth": path}}.
    """
    from .ingest import write_records_file

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, dict[str, Path]] = {}
    for name, sc in golden_scenarios().items():
        records, truths = generate_scenario(sc, seed=seed)
        rec_path = out_dir / f"{name}.records.ndjson"
        truth_path = out_dir / f"{name}.truth.ndjson"
        write_records_file(records, rec_path)
        with open(truth_path, "w", encoding="utf-8", newline="\n") as fh:
            write_truth(truths, fh)
        paths[name] = {"records": rec_path, "truth": truth_path}
    return paths
