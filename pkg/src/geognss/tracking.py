"""Acquisition/tracking hysteresis over a per-satellite C/N0 series.

A receiver locks when C/N0 first reaches the acquisition threshold and
holds lock down to the lower tracking threshold; occultation drops lock
immediately regardless of signal level. An absent C/N0 sample (the
satellite removed from the scenario) counts as below tracking.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import NonMonotonicTime
from .timebase import EpochTime


class Lock(enum.Enum):
    IDLE = "idle"
    TRACKED = "tracked"


@dataclass(frozen=True)
class TrackThresholds:
    acquisition_dbhz: float
    tracking_dbhz: float
    min_dwell_s: float = 0.0   # minimum time between state transitions

    def __post_init__(self):
        if self.tracking_dbhz > self.acquisition_dbhz:
            raise ValueError(
                f"tracking threshold {self.tracking_dbhz} above acquisition {self.acquisition_dbhz}")
        if self.min_dwell_s < 0:
            raise ValueError("min_dwell_s must be non-negative")


@dataclass(frozen=True)
class TrackState:
    state: Lock
    since: EpochTime

    @property
    def tracked(self) -> bool:
        return self.state is Lock.TRACKED


def step(state: TrackState, cn0_dbhz: float | None, occluded: bool,
         th: TrackThresholds, t: EpochTime) -> TrackState:
    """Advance the lock state by one sample."""
    if state.state is Lock.IDLE:
        want = Lock.TRACKED if (not occluded and cn0_dbhz is not None
                                and cn0_dbhz >= th.acquisition_dbhz) else Lock.IDLE
    else:
        drop = occluded or cn0_dbhz is None or cn0_dbhz < th.tracking_dbhz
        want = Lock.IDLE if drop else Lock.TRACKED
    if want is state.state:
        return state
    if th.min_dwell_s > 0.0 and (t - state.since) < th.min_dwell_s:
        return state
    return TrackState(want, t)


def run_series(samples: list[tuple[EpochTime, float | None, bool]],
               th: TrackThresholds) -> list[TrackState]:
    """Fold `step` over (epoch, cn0 or None, occluded) samples from IDLE."""
    out: list[TrackState] = []
    state: TrackState | None = None
    last: EpochTime | None = None
    for t, cn0, occluded in samples:
        if last is not None and not last < t:
            raise NonMonotonicTime(f"epoch {t.iso()} does not follow {last.iso()}")
        last = t
        if state is None:
            state = TrackState(Lock.IDLE, t)
        state = step(state, cn0, occluded, th, t)
        out.append(state)
    return out
