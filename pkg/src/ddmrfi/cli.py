"""Command-line entry point wiring the toolkit into reproducible pipelines.

Subcommands::

    simulate   scenario TOML -> records + truth NDJSON
    detect     records NDJSON -> flag CSV
    evaluate   flag CSV [+ truth NDJSON] -> daily/summary/hourly[/score] CSVs
    geom       overpass link-budget table and headline numbers
    ddm        synthesize or inspect delay-Doppler map files

Exit codes: 0 success; 2 config or file error; 3 input-order error;
4 schema/data error. All randomness flows from explicit seeds, so any
command rerun with the same flags is byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .core import (
    ConfigError,
    DataError,
    RecordParseError,
    Region,
    SchemaError,
    SequencingError,
)
from .ddm import (
    DEFAULT_GRID_SHAPE,
    DEFAULT_SPECULAR_DELAY_INDEX,
    NoiseModel,
    ddm_from_text,
    ddm_to_text,
    inject_jammer,
    noise_floor,
    noise_floor_db,
    synth_normal,
)
from .detect import DetectorConfig, run_stream, write_flag_csv, read_flag_csv
from .evaluate import (
    daily_counts,
    hourly_mean_max_from_flags,
    score_against_truth,
    summary,
    write_daily_csv,
    write_hourly_csv,
    write_score_csv,
    write_summary_csv,
)
from .geometry import (
    HALF_POWER_LOSS_DB,
    OverpassGeometry,
    detectable_window_s,
    fspl_delta_db,
    range_for_loss,
    slant_range,
)
from .ingest import load_region, read_records, write_records_file
from .scenario import generate_scenario, load_scenario, write_truth

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ORDER = 3
EXIT_SCHEMA = 4

FORMAT_VERSIONS = "record-ndjson=1 flag-csv=1 scenario-toml=1 ddm-text=1"


def _parse_bounds(text: str) -> Region:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--bounds needs lat_min,lat_max,lon_min,lon_max, got '{text}'")
    try:
        lat_min, lat_max, lon_min, lon_max = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"--bounds: {exc}") from exc
    return Region(lat_min, lat_max, lon_min, lon_max)


def _resolve_region(args) -> Region:
    if args.bounds:
        return _parse_bounds(args.bounds)
    return load_region(args.region)


def cmd_simulate(args) -> int:
    sc = load_scenario(args.scenario)
    records, truths = generate_scenario(sc, seed=args.seed)
    write_records_file(records, args.records)
    with open(args.truth, "w", encoding="utf-8", newline="\n") as fh:
        write_truth(truths, fh)
    print(
        f"simulate: {sc.name}: {len(records)} records, "
        f"{sum(t.jammed for t in truths)} jammed satellite-epochs -> "
        f"{args.records}, {args.truth}"
    )
    return EXIT_OK


def cmd_detect(args) -> int:
    region = _resolve_region(args)
    config = DetectorConfig(
        region=region,
        threshold_db=args.threshold,
        persistence_window_s=args.window,
        epoch_interval_s=args.interval,
        min_concurrent_sats=args.min_concurrent,
        kurtosis_rfi_bit=args.kurtosis_bit,
    )
    issues = []
    records = read_records(
        args.records,
        strict=not args.lenient,
        on_error=issues.append if args.lenient else None,
    )
    for issue in issues:
        print(f"detect: skipped {issue.message}", file=sys.stderr)
    keys = [(r.epoch_time, r.sat_id) for r in records]
    if keys != sorted(keys):
        if not args.sort:
            raise SequencingError(
                f"{args.records} is not sorted by epoch time; rerun with --sort"
            )
        records.sort(key=lambda r: (r.epoch_time, r.sat_id))
    header = (
        f"threshold_db={config.threshold_db:.3f} window_s={config.persistence_window_s} "
        f"interval_s={config.epoch_interval_s} min_concurrent={config.min_concurrent_sats} "
        f"kurtosis_bit={config.kurtosis_rfi_bit} "
        f"region={region.lat_min},{region.lat_max},{region.lon_min},{region.lon_max} "
        f"method={args.method}"
    )
    flags = run_stream(config, records)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_flag_csv(flags, fh, header_comment=header)
    else:
        write_flag_csv(flags, sys.stdout, header_comment=header)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    with open(args.flags, encoding="utf-8") as fh:
        flags = read_flag_csv(fh)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "daily.csv", "w", encoding="utf-8", newline="\n") as fh:
        write_daily_csv(daily_counts(flags), fh)
    with open(out_dir / "summary.csv", "w", encoding="utf-8", newline="\n") as fh:
        write_summary_csv(summary(flags), fh)
    with open(out_dir / "hourly.csv", "w", encoding="utf-8", newline="\n") as fh:
        write_hourly_csv(hourly_mean_max_from_flags(flags), fh)
    produced = ["daily.csv", "summary.csv", "hourly.csv"]
    if args.truth:
        from .scenario import read_truth

        with open(args.truth, encoding="utf-8") as fh:
            truths = read_truth(fh)
        with open(out_dir / "score.csv", "w", encoding="utf-8", newline="\n") as fh:
            write_score_csv(score_against_truth(flags, truths), fh)
        produced.append("score.csv")
    print(f"evaluate: wrote {', '.join(produced)} in {out_dir}")
    return EXIT_OK


def cmd_geom(args) -> int:
    geom = OverpassGeometry(args.altitude, args.speed)
    ratio_pct = 100.0 * (slant_range(geom, 10.0) / geom.altitude_km - 1.0)
    half = range_for_loss(geom, HALF_POWER_LOSS_DB)
    print(
        f"# headline: slant(10s)={slant_range(geom, 10.0):.3f} km "
        f"fspl_delta(10s)={fspl_delta_db(geom, 10.0):.4f} dB "
        f"range_increase(10s)={ratio_pct:.4f}%"
    )
    print(
        f"# headline: halfpower_slant={half.slant_km:.3f} km "
        f"halfpower_horizontal={half.horizontal_km:.3f} km "
        f"halfpower_transit={half.transit_time_s:.3f} s "
        f"halfpower_window={detectable_window_s(geom, HALF_POWER_LOSS_DB):.3f} s"
    )
    print("dt_s,slant_km,fspl_delta_db")
    n = int(args.range // args.step)
    for k in range(-n, n + 1):
        dt = k * args.step
        print(f"{dt!r},{slant_range(geom, dt):.3f},{fspl_delta_db(geom, dt):.4f}")
    return EXIT_OK


def _parse_shape(text: str) -> tuple[int, int]:
    try:
        n_delay, n_doppler = (int(p) for p in text.lower().split("x"))
        return n_delay, n_doppler
    except ValueError as exc:
        raise ConfigError(f"--shape must look like 17x11, got '{text}'") from exc


def cmd_ddm(args) -> int:
    if args.ddm_action == "synth":
        grid = synth_normal(
            grid_shape=_parse_shape(args.shape),
            model=NoiseModel(1.0, args.noise_counts / 2.0, args.noise_counts / 2.0),
            peak_counts=args.peak,
            roughness=args.roughness,
            rng_seed=args.seed,
            specular_delay_index=args.sp_delay,
        )
        if args.jammer_col is not None:
            grid = inject_jammer(grid, args.jammer_col, args.jammer_counts)
        Path(args.out).write_text(ddm_to_text(grid), encoding="utf-8", newline="\n")
        print(f"ddm synth: wrote {args.out} (noise floor {noise_floor_db(grid):.3f} dB)")
        return EXIT_OK
    grid = ddm_from_text(Path(args.input).read_text(encoding="utf-8"))
    print(
        f"{args.input}: {grid.n_delay}x{grid.n_doppler} bins, "
        f"specular=({grid.specular_delay_index},{grid.specular_doppler_index}), "
        f"noise_floor={noise_floor(grid)!r} counts = {noise_floor_db(grid):.3f} dB"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddmrfi",
        description="GNSS-R delay-Doppler map noise-floor RFI detection toolkit",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"ddmrfi {__version__} ({FORMAT_VERSIONS})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate records + truth from a scenario TOML")
    p.add_argument("scenario", help="scenario TOML file")
    p.add_argument("--records", required=True, help="output records NDJSON path")
    p.add_argument("--truth", required=True, help="output truth NDJSON path")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect", help="run the detectors over a record stream")
    p.add_argument("records", help="input records NDJSON path")
    p.add_argument(
        "--method",
        choices=("kurtosis", "mean", "proposed", "all"),
        default="all",
        help="method of interest, recorded in the run header (all columns "
        "are always computed in one pass)",
    )
    p.add_argument("--region", default="white-sands", help="region preset name or TOML path")
    p.add_argument("--bounds", default=None, help="lat_min,lat_max,lon_min,lon_max (overrides --region)")
    p.add_argument("--threshold", type=float, default=41.0, help="detection threshold in dB")
    p.add_argument("--window", type=float, default=10.0, help="persistence window in seconds")
    p.add_argument("--interval", type=float, default=0.5, help="epoch interval in seconds")
    p.add_argument("--min-concurrent", type=int, default=2, help="satellites needed for concurrence")
    p.add_argument("--kurtosis-bit", type=int, default=2, help="RFI bit index in quality_flags")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.add_argument("--sort", action="store_true", help="sort records by (time, sat) first")
    p.add_argument("--lenient", action="store_true", help="skip malformed lines instead of aborting")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("evaluate", help="summarize a flag CSV into report CSVs")
    p.add_argument("flags", help="flag CSV produced by detect")
    p.add_argument("--truth", default=None, help="truth NDJSON for precision/recall scoring")
    p.add_argument("--out-dir", default=".", help="directory for the report CSVs")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("geom", help="overpass slant-range / path-loss table")
    p.add_argument("--altitude", type=float, default=500.0, help="satellite altitude, km")
    p.add_argument("--speed", type=float, default=7.0, help="ground-track speed, km/s")
    p.add_argument("--range", type=float, default=60.0, help="half-range of dt sweep, s")
    p.add_argument("--step", type=float, default=1.0, help="dt step, s")
    p.set_defaults(func=cmd_geom)

    p = sub.add_parser("ddm", help="synthesize or inspect DDM files")
    ddm_sub = p.add_subparsers(dest="ddm_action", required=True)
    ps = ddm_sub.add_parser("synth", help="write a synthetic DDM file")
    ps.add_argument("--out", required=True, help="output DDM text file")
    ps.add_argument("--shape", default=f"{DEFAULT_GRID_SHAPE[0]}x{DEFAULT_GRID_SHAPE[1]}")
    ps.add_argument("--sp-delay", type=int, default=DEFAULT_SPECULAR_DELAY_INDEX)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--noise-counts", type=float, default=1000.0, help="nominal noise level")
    ps.add_argument("--peak", type=float, default=1e5, help="specular peak counts")
    ps.add_argument("--roughness", type=float, default=0.3)
    ps.add_argument("--jammer-col", type=int, default=None, help="Doppler column for a stripe")
    ps.add_argument("--jammer-counts", type=float, default=5e4, help="stripe counts")
    ps.set_defaults(func=cmd_ddm)
    pi = ddm_sub.add_parser("info", help="print a DDM file's noise floor")
    pi.add_argument("input", help="DDM text file")
    pi.set_defaults(func=cmd_ddm)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, OSError) as exc:
        print(f"ddmrfi: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SequencingError as exc:
        print(f"ddmrfi: input-order error: {exc}", file=sys.stderr)
        return EXIT_ORDER
    except (SchemaError, RecordParseError, DataError) as exc:
        print(f"ddmrfi: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
