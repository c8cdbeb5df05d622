"""Slant-range and free-space path-loss geometry for a jammer overpass.

Flat-earth, straight-track model: a ground emitter sits at the point of
closest approach of a satellite moving at constant ground speed, so the
slant range at time dt from closest approach is
sqrt(altitude^2 + (speed*dt)^2) and the extra path loss relative to
closest approach is 20*log10(slant/altitude). These few lines are the
quantitative justification for treating a short persistence window as a
conservative filter: a jammer strong enough to matter stays within a few
dB of its overhead level for minutes of transit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import ConfigError, GROUND_SPEED_KM_S, SAT_ALTITUDE_KM

# Loss at which received power has halved; the usual "3 dB" point.
HALF_POWER_LOSS_DB = 10.0 * math.log10(2.0)


@dataclass(frozen=True)
class OverpassGeometry:
    altitude_km: float = SAT_ALTITUDE_KM
    ground_speed_km_s: float = GROUND_SPEED_KM_S

    def __post_init__(self):
        if self.altitude_km <= 0:
            raise ConfigError(f"altitude_km must be > 0, got {self.altitude_km}")
        if self.ground_speed_km_s <= 0:
            raise ConfigError(
                f"ground_speed_km_s must be > 0, got {self.ground_speed_km_s}"
            )


class RangePoint(NamedTuple):
    slant_km: float
    horizontal_km: float
    transit_time_s: float


def slant_range(geom: OverpassGeometry, dt_s: float) -> float:
    """Slant range in km at dt seconds from closest approach (dt may be < 0)."""
    return math.hypot(geom.altitude_km, geom.ground_speed_km_s * dt_s)


def fspl_delta_db(geom: OverpassGeometry, dt_s: float) -> float:
    """Extra free-space path loss (dB) relative to closest approach."""
    return 20.0 * math.log10(slant_range(geom, dt_s) / geom.altitude_km)


def fspl_delta_db_at_distance(geom: OverpassGeometry, horizontal_km: float) -> float:
    """Extra path loss (dB) at a given horizontal offset from the emitter."""
    return 20.0 * math.log10(
        math.hypot(geom.altitude_km, horizontal_km) / geom.altitude_km
    )


def range_for_loss(geom: OverpassGeometry, loss_db: float) -> RangePoint:
    """Invert fspl_delta_db: where does the loss reach loss_db?

    Returns the slant range, the corresponding horizontal offset, and
    the one-way transit time from closest approach to that offset.
    """
    if loss_db < 0:
        raise ConfigError(f"loss_db must be >= 0, got {loss_db}")
    slant = geom.altitude_km * 10.0 ** (loss_db / 20.0)
    horizontal = math.sqrt(max(slant**2 - geom.altitude_km**2, 0.0))
    return RangePoint(slant, horizontal, horizontal / geom.ground_speed_km_s)


def detectable_window_s(geom: OverpassGeometry, loss_budget_db: float) -> float:
    """Total time (s) a pass spends within the loss budget (both sides)."""
    return 2.0 * range_for_loss(geom, loss_budget_db).transit_time_s


def persistence_margin(
    geom: OverpassGeometry, window_s: float, loss_budget_db: float
) -> float:
    """Detectable window over persistence window; >> 1 means conservative."""
    if window_s <= 0:
        raise ConfigError(f"window_s must be > 0, got {window_s}")
    return detectable_window_s(geom, loss_budget_db) / window_s
