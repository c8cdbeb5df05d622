"""Delay-Doppler map grid model and synthetic DDM patterns.

A DDM is a delay x Doppler matrix of received power counts referenced to
the specular bin (Delay = 0, Doppler = 0). Delay bins before the
specular row form the forbidden zone, where no legitimate reflection
power can arrive; the average power over that zone is the noise floor,
which is the detection statistic consumed by the detectors.

Synthetic generators produce the three situations of interest:

* ``synth_normal`` - thermal noise plus a horseshoe-shaped reflection
  template peaking at the specular bin,
* ``inject_jammer`` - a constant-Doppler vertical stripe spanning the
  whole delay axis (the signature of a ground jammer),
* ``inject_atypical`` - an arbitrary free-form mask of elevated bins.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .core import ConfigError, DataError, to_db

DEFAULT_GRID_SHAPE = (17, 11)  # (n_delay, n_doppler)
DEFAULT_SPECULAR_DELAY_INDEX = 4
DEFAULT_DELAY_BIN_CHIPS = 0.25
DEFAULT_DOPPLER_BIN_HZ = 500.0

# Horseshoe template shape parameters (bin units). The arms open at
# arm_rate * sqrt(delay offset) Doppler bins from center; widths and
# decay lengths grow with surface roughness.
_ARM_RATE = 1.1
_WIDTH_BASE = 0.7
_WIDTH_ROUGHNESS_GAIN = 0.8
_DECAY_BASE = 2.5
_DECAY_ROUGHNESS_GAIN = 5.0


@dataclass(frozen=True, eq=False)
class DdmGrid:
    """Immutable delay x Doppler power grid with specular-bin reference."""

    power: np.ndarray  # (n_delay, n_doppler), nonnegative counts
    specular_delay_index: int
    specular_doppler_index: int
    delay_bin_chips: float = DEFAULT_DELAY_BIN_CHIPS
    doppler_bin_hz: float = DEFAULT_DOPPLER_BIN_HZ

    def __post_init__(self):
        power = np.array(self.power, dtype=np.float64, copy=True)
        if power.ndim != 2:
            raise ConfigError(f"power must be a 2-D matrix, got ndim={power.ndim}")
        if np.any(power < 0) or not np.all(np.isfinite(power)):
            raise ConfigError("power values must be finite and >= 0")
        n_delay, n_doppler = power.shape
        if not 1 <= self.specular_delay_index < n_delay:
            raise ConfigError(
                "specular_delay_index must leave a nonempty forbidden zone: "
                f"need 1 <= idx < {n_delay}, got {self.specular_delay_index}"
            )
        if not 0 <= self.specular_doppler_index < n_doppler:
            raise ConfigError(
                f"specular_doppler_index out of range [0, {n_doppler}): "
                f"{self.specular_doppler_index}"
            )
        power.setflags(write=False)
        object.__setattr__(self, "power", power)

    @property
    def n_delay(self) -> int:
        return self.power.shape[0]

    @property
    def n_doppler(self) -> int:
        return self.power.shape[1]

    def forbidden_zone(self) -> np.ndarray:
        """View of the bins with delay index below the specular row."""
        return self.power[: self.specular_delay_index, :]

    def with_power(self, power: np.ndarray) -> "DdmGrid":
        """Copy of this grid with a replacement power matrix."""
        return DdmGrid(
            power=power,
            specular_delay_index=self.specular_delay_index,
            specular_doppler_index=self.specular_doppler_index,
            delay_bin_chips=self.delay_bin_chips,
            doppler_bin_hz=self.doppler_bin_hz,
        )


@dataclass(frozen=True)
class NoiseModel:
    """Receiver noise composition: counts = gain * (antenna + receiver power)."""

    system_gain: float
    antenna_noise_power: float
    receiver_noise_power: float

    def __post_init__(self):
        for name in ("system_gain", "antenna_noise_power", "receiver_noise_power"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")


def nominal_noise_counts(model: NoiseModel) -> float:
    """Expected noise-floor count level for a clean receiver."""
    return model.system_gain * (model.antenna_noise_power + model.receiver_noise_power)


def noise_floor(grid: DdmGrid) -> float:
    """Noise floor in counts: mean power over the forbidden zone."""
    return float(np.mean(grid.forbidden_zone()))


def noise_floor_db(grid: DdmGrid) -> float:
    return to_db(noise_floor(grid))


def _horseshoe_template(
    shape: tuple[int, int],
    specular_delay_index: int,
    specular_doppler_index: int,
    roughness: float,
) -> np.ndarray:
    """Deterministic horseshoe template, normalized to 1 at the specular bin.

    Bilaterally symmetric about the specular Doppler column; arms widen
    and persist to larger delays as roughness increases. The forbidden
    zone stays exactly zero.
    """
    n_delay, n_doppler = shape
    template = np.zeros(shape)
    decay = _DECAY_BASE + _DECAY_ROUGHNESS_GAIN * roughness
    for i in range(specular_delay_index, n_delay):
        delta = i - specular_delay_index
        arm = _ARM_RATE * math.sqrt(delta)
        sigma = _WIDTH_BASE + _WIDTH_ROUGHNESS_GAIN * roughness * math.sqrt(delta)
        amp = math.exp(-delta / decay)
        offsets = np.arange(n_doppler) - specular_doppler_index
        lobes = np.exp(-((offsets - arm) ** 2) / (2 * sigma**2)) + np.exp(
            -((offsets + arm) ** 2) / (2 * sigma**2)
        )
        template[i, :] = amp * lobes
    return template / template[specular_delay_index, specular_doppler_index]


def synth_normal(
    grid_shape: tuple[int, int] = DEFAULT_GRID_SHAPE,
    model: NoiseModel = NoiseModel(1.0, 500.0, 500.0),
    peak_counts: float = 1e5,
    roughness: float = 0.3,
    rng_seed: int = 0,
    specular_delay_index: int = DEFAULT_SPECULAR_DELAY_INDEX,
    specular_doppler_index: int | None = None,
    delay_bin_chips: float = DEFAULT_DELAY_BIN_CHIPS,
    doppler_bin_hz: float = DEFAULT_DOPPLER_BIN_HZ,
) -> DdmGrid:
    """Generate a clean reflection DDM: noise baseline plus horseshoe.

    Every bin receives multiplicative exponential noise (mean equal to
    the model's nominal counts; correlator noise power is positive and
    right-skewed). The horseshoe template is added outside the forbidden
    zone with its specular-bin value equal to peak_counts. Bit-identical
    output for identical seed and parameters.
    """
    if not 0.0 <= roughness <= 1.0:
        raise ConfigError(f"roughness must be in [0, 1], got {roughness}")
    baseline = nominal_noise_counts(model)
    if peak_counts <= baseline:
        raise ConfigError(
            f"peak_counts {peak_counts} must exceed nominal noise {baseline}"
        )
    if specular_doppler_index is None:
        specular_doppler_index = grid_shape[1] // 2
    rng = np.random.default_rng(rng_seed)
    noise = baseline * rng.exponential(1.0, size=grid_shape)
    template = _horseshoe_template(
        grid_shape, specular_delay_index, specular_doppler_index, roughness
    )
    return DdmGrid(
        power=noise + peak_counts * template,
        specular_delay_index=specular_delay_index,
        specular_doppler_index=specular_doppler_index,
        delay_bin_chips=delay_bin_chips,
        doppler_bin_hz=doppler_bin_hz,
    )


def inject_jammer(grid: DdmGrid, doppler_index: int, stripe_counts: float) -> DdmGrid:
    """Add a vertical stripe: stripe_counts on every delay bin of one column.

    The stripe spans the full delay axis, forbidden zone included, which
    is what raises the noise floor.
    """
    if not 0 <= doppler_index < grid.n_doppler:
        raise ConfigError(
            f"doppler_index out of range [0, {grid.n_doppler}): {doppler_index}"
        )
    if stripe_counts < 0:
        raise ConfigError(f"stripe_counts must be >= 0, got {stripe_counts}")
    power = np.array(grid.power, copy=True)
    power[:, doppler_index] += stripe_counts
    return grid.with_power(power)


def inject_atypical(
    grid: DdmGrid, mask: Iterable[tuple[int, int]], add_counts: float
) -> DdmGrid:
    """Add add_counts to exactly the masked (delay, doppler) bins."""
    if add_counts < 0:
        raise ConfigError(f"add_counts must be >= 0, got {add_counts}")
    power = np.array(grid.power, copy=True)
    for di, dj in set(mask):
        if not (0 <= di < grid.n_delay and 0 <= dj < grid.n_doppler):
            raise ConfigError(
                f"mask index ({di}, {dj}) out of range "
                f"({grid.n_delay} x {grid.n_doppler})"
            )
        power[di, dj] += add_counts
    return grid.with_power(power)


def write_ddm(grid: DdmGrid, stream: TextIO) -> None:
    """Write the plain-text DDM format.

    Line 1: ``n_delay n_doppler sp_delay_idx sp_doppler_idx
    delay_bin_chips doppler_bin_hz``; then n_delay rows of n_doppler
    decimal counts. Floats use shortest round-trip form; LF endings.
    """
    stream.write(
        f"{grid.n_delay} {grid.n_doppler} "
        f"{grid.specular_delay_index} {grid.specular_doppler_index} "
        f"{grid.delay_bin_chips!r} {grid.doppler_bin_hz!r}\n"
    )
    for row in grid.power:
        stream.write(" ".join(repr(float(v)) for v in row) + "\n")


def read_ddm(stream: TextIO) -> DdmGrid:
    """Parse the plain-text DDM format written by write_ddm."""
    header = stream.readline().split()
    if len(header) != 6:
        raise DataError(f"DDM header must have 6 fields, got {len(header)}")
    try:
        n_delay, n_doppler = int(header[0]), int(header[1])
        sp_delay, sp_doppler = int(header[2]), int(header[3])
        bin_chips, bin_hz = float(header[4]), float(header[5])
    except ValueError as exc:
        raise DataError(f"bad DDM header: {exc}") from exc
    rows = []
    for i in range(n_delay):
        fields = stream.readline().split()
        if len(fields) != n_doppler:
            raise DataError(
                f"DDM row {i}: expected {n_doppler} values, got {len(fields)}"
            )
        rows.append([float(v) for v in fields])
    return DdmGrid(
        power=np.array(rows),
        specular_delay_index=sp_delay,
        specular_doppler_index=sp_doppler,
        delay_bin_chips=bin_chips,
        doppler_bin_hz=bin_hz,
    )


def ddm_to_text(grid: DdmGrid) -> str:
    buf = io.StringIO()
    write_ddm(grid, buf)
    return buf.getvalue()


def ddm_from_text(text: str) -> DdmGrid:
    return read_ddm(io.StringIO(text))
