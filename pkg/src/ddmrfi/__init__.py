"""GNSS-R delay-Doppler map noise-floor RFI detection toolkit.

Detects radio-frequency interference from the noise floor of spaceborne
GNSS-reflectometry delay-Doppler maps. The headline detector takes the
maximum of the four simultaneously received channel noise floors (so
contamination of a single reflection path is not averaged away) and
gates raw exceedances behind two-tier verification: multi-satellite
concurrence in the same epoch, or persistence across a 10-second
window. Mean-based and quality-bit baselines, the overpass link-budget
geometry behind the persistence window, a truth-labeled scenario
simulator, and an evaluation harness round out the toolkit.
"""

__version__ = "0.1.0"

from .core import (
    ChannelObservation,
    ConfigError,
    DataError,
    EpochRecord,
    InvalidObservationError,
    RecordParseError,
    Region,
    SchemaError,
    SequencingError,
    ToolkitError,
    chip_units,
    from_db,
    normalize_lon,
    region_contains,
    to_db,
)
from .ddm import (
    DdmGrid,
    NoiseModel,
    inject_atypical,
    inject_jammer,
    noise_floor,
    noise_floor_db,
    nominal_noise_counts,
    synth_normal,
)
from .detect import (
    Detector,
    DetectorConfig,
    FlagRecord,
    eval_kurtosis_flag,
    eval_location,
    eval_max_flag,
    eval_mean_flag,
    run_partitioned,
    run_stream,
)
from .geometry import (
    OverpassGeometry,
    fspl_delta_db,
    persistence_margin,
    range_for_loss,
    slant_range,
)
from .scenario import JammerSpec, Scenario, TrackSpec, TruthLabel, generate
from .evaluate import daily_counts, hourly_mean_max, score_against_truth, summary

__all__ = [
    "ChannelObservation",
    "ConfigError",
    "DataError",
    "DdmGrid",
    "Detector",
    "DetectorConfig",
    "EpochRecord",
    "FlagRecord",
    "InvalidObservationError",
    "JammerSpec",
    "NoiseModel",
    "OverpassGeometry",
    "RecordParseError",
    "Region",
    "Scenario",
    "SchemaError",
    "SequencingError",
    "ToolkitError",
    "TrackSpec",
    "TruthLabel",
    "chip_units",
    "daily_counts",
    "eval_kurtosis_flag",
    "eval_location",
    "eval_max_flag",
    "eval_mean_flag",
    "from_db",
    "fspl_delta_db",
    "generate",
    "hourly_mean_max",
    "inject_atypical",
    "inject_jammer",
    "noise_floor",
    "noise_floor_db",
    "nominal_noise_counts",
    "normalize_lon",
    "persistence_margin",
    "range_for_loss",
    "region_contains",
    "run_partitioned",
    "run_stream",
    "score_against_truth",
    "slant_range",
    "summary",
    "synth_normal",
    "to_db",
]
