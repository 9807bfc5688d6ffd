"""Keplerian two-body propagation, Walker constellation synthesis and frames.

Unperturbed two-body motion of mean elements: no SGP4, no J2, no drag.
Visibility and DOP statistics at GEO are geometry-dominated over 48 h,
so an analytic propagator keeps every run exactly reproducible. Swapping
in a higher-fidelity propagator only has to honour `propagate_series`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import MU_EARTH, R_EARTH
from .errors import DegenerateFrame, InvalidWalker, NonConvergence
from .timebase import EpochTime

TWO_PI = 2.0 * math.pi


def _norm_angle(x: float) -> float:
    return x % TWO_PI


@dataclass(frozen=True)
class KeplerianElements:
    """Classical element set; angles in radians, normalized to [0, 2pi)."""

    semi_major_axis: float       # km
    eccentricity: float
    inclination: float
    raan: float
    arg_perigee: float
    mean_anomaly_at_epoch: float
    epoch: EpochTime

    def __post_init__(self):
        if not self.semi_major_axis > R_EARTH:
            raise ValueError(f"semi_major_axis {self.semi_major_axis} km not above Earth radius")
        if not 0.0 <= self.eccentricity < 1.0:
            raise ValueError(f"eccentricity {self.eccentricity} outside [0, 1)")
        for name in ("inclination", "raan", "arg_perigee", "mean_anomaly_at_epoch"):
            object.__setattr__(self, name, _norm_angle(getattr(self, name)))

    @property
    def mean_motion(self) -> float:
        """rad/s"""
        return math.sqrt(MU_EARTH / self.semi_major_axis ** 3)

    @property
    def period(self) -> float:
        """s"""
        return TWO_PI / self.mean_motion


@dataclass(frozen=True)
class StateVector:
    """ECI position (km) and velocity (km/s) at an epoch."""

    position: np.ndarray
    velocity: np.ndarray
    epoch: EpochTime

    def __post_init__(self):
        for name in ("position", "velocity"):
            v = np.asarray(getattr(self, name), dtype=float).reshape(3).copy()
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    def specific_energy(self) -> float:
        """v^2/2 - mu/r, km^2/s^2; a two-body invariant."""
        r = float(np.linalg.norm(self.position))
        v = float(np.linalg.norm(self.velocity))
        return 0.5 * v * v - MU_EARTH / r


@dataclass(frozen=True)
class WalkerSpec:
    """Walker delta t/p/f constellation parameters (circular orbits)."""

    total_sats: int
    planes: int
    phasing: int
    semi_major_axis: float   # km
    inclination: float       # rad
    raan_offset: float = 0.0
    anomaly_offset: float = 0.0

    def __post_init__(self):
        if self.planes <= 0 or self.total_sats <= 0:
            raise InvalidWalker(f"t={self.total_sats}, p={self.planes} must be positive")
        if self.total_sats % self.planes != 0:
            raise InvalidWalker(f"t={self.total_sats} not divisible by p={self.planes}")
        if not 0 <= self.phasing < self.planes:
            raise InvalidWalker(f"f={self.phasing} outside [0, p={self.planes})")


def solve_kepler(mean_anomaly, eccentricity: float):
    """Solve E - e*sin(E) = M for the eccentric anomaly.

    Newton iteration seeded with M (e < 0.8) or pi, capped at 50 steps;
    falls back to bisection on [M-e, M+e], where the residual always
    brackets zero. Accepts scalars or arrays; residual < 1e-12 rad.
    """
    e = float(eccentricity)
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity {e} outside [0, 1)")
    M = np.asarray(mean_anomaly, dtype=float)
    scalar = M.ndim == 0
    M = np.atleast_1d(M)

    E = M.copy() if e < 0.8 else np.full_like(M, math.pi)
    for _ in range(50):
        f = E - e * np.sin(E) - M
        if np.all(np.abs(f) < 1e-13):
            break
        E = E - f / (1.0 - e * np.cos(E))

    bad = np.abs(E - e * np.sin(E) - M) >= 1e-12
    if np.any(bad):
        lo, hi = M[bad] - e, M[bad] + e
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            below = mid - e * np.sin(mid) - M[bad] < 0.0
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        E = E.copy()
        E[bad] = 0.5 * (lo + hi)
        if np.any(np.abs(E - e * np.sin(E) - M) >= 1e-12):
            raise NonConvergence(f"Kepler solver stalled at e={e}")

    return float(E[0]) if scalar else E


def perifocal_to_eci_matrix(raan: float, inclination: float, arg_perigee: float) -> np.ndarray:
    """Rotation taking perifocal coordinates into ECI."""
    cO, sO = math.cos(raan), math.sin(raan)
    ci, si = math.cos(inclination), math.sin(inclination)
    cw, sw = math.cos(arg_perigee), math.sin(arg_perigee)
    return np.array([
        [cO * cw - sO * sw * ci, -cO * sw - sO * cw * ci, sO * si],
        [sO * cw + cO * sw * ci, -sO * sw + cO * cw * ci, -cO * si],
        [sw * si, cw * si, ci],
    ])


def propagate_series(elements: KeplerianElements, times_s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Propagate to an array of epochs (seconds past J2000).

    Returns (positions, velocities) of shape (n, 3) in km and km/s.
    """
    t = np.asarray(times_s, dtype=float)
    a, e = elements.semi_major_axis, elements.eccentricity
    n = elements.mean_motion
    M = (elements.mean_anomaly_at_epoch + n * (t - elements.epoch.seconds_since_reference)) % TWO_PI
    E = np.atleast_1d(solve_kepler(M, e))

    cE, sE = np.cos(E), np.sin(E)
    r = a * (1.0 - e * cE)
    nu = 2.0 * np.arctan2(np.sqrt(1.0 + e) * np.sin(E / 2.0),
                          np.sqrt(1.0 - e) * np.cos(E / 2.0))
    pos_pf = np.stack([r * np.cos(nu), r * np.sin(nu), np.zeros_like(r)], axis=-1)
    vf = math.sqrt(MU_EARTH * a) / r
    vel_pf = np.stack([-vf * sE, vf * math.sqrt(1.0 - e * e) * cE, np.zeros_like(r)], axis=-1)

    R = perifocal_to_eci_matrix(elements.raan, elements.inclination, elements.arg_perigee)
    return pos_pf @ R.T, vel_pf @ R.T


def propagate(elements: KeplerianElements, t: EpochTime) -> StateVector:
    """Element-to-state conversion at a single epoch."""
    pos, vel = propagate_series(elements, np.array([t.seconds_since_reference]))
    return StateVector(pos[0], vel[0], t)


def generate_walker(spec: WalkerSpec, epoch: EpochTime) -> list[KeplerianElements]:
    """Expand a Walker delta pattern into element sets, plane-major order.

    Plane p' gets RAAN raan_offset + p'*(2pi/p); slot s in that plane gets
    mean anomaly anomaly_offset + s*(2pi/(t/p)) + p'*f*(2pi/t). All orbits
    are circular and share the semi-major axis and inclination.
    """
    per_plane = spec.total_sats // spec.planes
    out = []
    for plane in range(spec.planes):
        raan = spec.raan_offset + plane * TWO_PI / spec.planes
        for slot in range(per_plane):
            anomaly = (spec.anomaly_offset
                       + slot * TWO_PI / per_plane
                       + plane * spec.phasing * TWO_PI / spec.total_sats)
            out.append(KeplerianElements(
                semi_major_axis=spec.semi_major_axis,
                eccentricity=0.0,
                inclination=spec.inclination,
                raan=raan,
                arg_perigee=0.0,
                mean_anomaly_at_epoch=anomaly,
                epoch=epoch,
            ))
    return out


def local_orbital_rotation(state: StateVector) -> np.ndarray:
    """Rows of the returned matrix are the (radial, along, cross) axes in ECI.

    Radial points away from Earth, cross-track along the orbit normal,
    along-track completes the right-handed triad.
    """
    return _local_rotation(state.position, state.velocity)


def _local_rotation(position: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    h = np.cross(position, velocity)
    hn = np.linalg.norm(h)
    rn = np.linalg.norm(position)
    if rn < 1e-9 or hn < 1e-9:
        raise DegenerateFrame("position and velocity are parallel or zero")
    radial = position / rn
    cross = h / hn
    along = np.cross(cross, radial)
    return np.stack([radial, along, cross])


def eci_to_local_orbital(receiver_state: StateVector, vector_eci: np.ndarray) -> np.ndarray:
    """Rotate an ECI vector into the receiver (radial, along, cross) frame."""
    return local_orbital_rotation(receiver_state) @ np.asarray(vector_eci, dtype=float)
