"""Dilution of precision, availability and percentile statistics.

The geometry matrix is built in the receiver's (radial, along, cross)
frame so the radial axis maps onto the mission's "vertical" and the
along/cross pair onto "horizontal". DOPs are UNDEFINED (None), not an
error, when the normal matrix is ill-conditioned; undefined epochs are
excluded from the aggregate statistics and counted in the run report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateGeometry, EmptySeries, InsufficientSatellites)
from .orbits import StateVector, local_orbital_rotation

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class ErrorModel:
    """Uniform 1-sigma user-equivalent range error, meters."""

    uere_m: float = 5.0

    def __post_init__(self):
        if self.uere_m <= 0:
            raise ValueError(f"uere must be positive, got {self.uere_m}")


@dataclass(frozen=True)
class DopSolution:
    gdop: float
    pdop: float
    hdop: float
    vdop: float
    tdop: float
    covariance: np.ndarray   # (H^T H)^-1, unit-range-error factor

    def __post_init__(self):
        q = np.asarray(self.covariance, dtype=float).copy()
        q.flags.writeable = False
        object.__setattr__(self, "covariance", q)


def geometry_matrix(rx_state: StateVector, sat_positions) -> np.ndarray:
    """n x 4 matrix with rows [-u_i, 1], u_i in the local orbital frame."""
    sats = np.atleast_2d(np.asarray(sat_positions, dtype=float))
    rel = sats - rx_state.position[None, :]
    rng = np.linalg.norm(rel, axis=1)
    if np.any(rng == 0.0):
        raise DegenerateGeometry("satellite coincides with the receiver")
    R = local_orbital_rotation(rx_state)
    u_local = (rel / rng[:, None]) @ R.T
    return np.hstack([-u_local, np.ones((len(sats), 1))])


def dops(H: np.ndarray) -> DopSolution | None:
    """DOP family from the n x 4 geometry matrix.

    Returns None (UNDEFINED) when cond(H^T H) exceeds 1e12; raises
    InsufficientSatellites below four rows.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[1] != 4:
        raise ValueError(f"geometry matrix must be n x 4, got {H.shape}")
    if H.shape[0] < 4:
        raise InsufficientSatellites(f"{H.shape[0]} satellites, need at least 4")
    normal = H.T @ H
    if np.linalg.cond(normal) > CONDITION_LIMIT:
        return None
    Q = np.linalg.inv(normal)
    return DopSolution(
        gdop=math.sqrt(np.trace(Q)),
        pdop=math.sqrt(Q[0, 0] + Q[1, 1] + Q[2, 2]),
        hdop=math.sqrt(Q[1, 1] + Q[2, 2]),
        vdop=math.sqrt(Q[0, 0]),
        tdop=math.sqrt(Q[3, 3]),
        covariance=Q,
    )


def position_error_sigma(covariance: np.ndarray, err: ErrorModel) -> tuple[float, float, float]:
    """1-sigma (radial, along, cross) position error in meters."""
    Q = np.asarray(covariance, dtype=float)
    return (err.uere_m * math.sqrt(Q[0, 0]),
            err.uere_m * math.sqrt(Q[1, 1]),
            err.uere_m * math.sqrt(Q[2, 2]))


def availability(counts, step_s: float, min_sats: int = 4) -> tuple[float, float]:
    """(fraction of time, seconds) with at least `min_sats` satellites.

    Epochs are weighted uniformly by the grid step.
    """
    c = np.asarray(counts)
    if c.size == 0:
        raise EmptySeries("no epochs in the availability table")
    good = int(np.count_nonzero(c >= min_sats))
    return good / c.size, good * step_s


def percentile(series, p: float) -> float:
    """Nearest-rank percentile over the finite entries of `series`.

    None and NaN entries (UNDEFINED epochs) are excluded; EmptySeries if
    nothing survives.
    """
    if not 0.0 <= p <= 100.0:
        raise ValueError(f"percentile {p} outside [0, 100]")
    values = np.array([v for v in series if v is not None], dtype=float)
    values = values[np.isfinite(values)]
    if values.size == 0:
        raise EmptySeries("no finite values to rank")
    values.sort()
    rank = max(1, math.ceil(p / 100.0 * values.size))
    return float(values[rank - 1])
