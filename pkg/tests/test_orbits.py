import math

import numpy as np
import pytest

from geognss.constants import MU_EARTH
from geognss.errors import DegenerateFrame, InvalidWalker
from geognss.orbits import (KeplerianElements, StateVector, WalkerSpec,
                            eci_to_local_orbital, generate_walker,
                            local_orbital_rotation, propagate, propagate_series,
                            solve_kepler)
from geognss.timebase import EpochTime

T0 = EpochTime.from_iso("2008-03-22T00:00:00")
TWO_PI = 2.0 * math.pi


def elements(a=42166.892, e=0.0, i=0.0, raan=0.0, argp=0.0, m0=0.0, epoch=T0):
    return KeplerianElements(a, e, i, raan, argp, m0, epoch)


def kepler_bisect(M, e):
    """Independent oracle: bisection on the monotone residual E - e sinE - M."""
    lo, hi = M - e, M + e
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid - e * math.sin(mid) - M < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestSolveKepler:
    def test_zero_mean_anomaly(self):
        for e in (0.0, 0.3, 0.9):
            assert solve_kepler(0.0, e) == pytest.approx(0.0, abs=1e-12)

    def test_circular_identity(self):
        assert solve_kepler(1.234, 0.0) == pytest.approx(1.234, abs=1e-12)

    def test_against_bisection_oracle(self):
        # frozen from kepler_bisect(pi/2, 0.1)
        assert solve_kepler(math.pi / 2, 0.1) == pytest.approx(1.670301669482284, abs=1e-10)

    def test_residual_over_grid(self):
        M = np.linspace(0.0, TWO_PI, 181, endpoint=False)
        for e in np.linspace(0.0, 0.95, 20):
            E = solve_kepler(M, float(e))
            assert np.max(np.abs(E - e * np.sin(E) - M)) < 1e-12

    def test_matches_oracle_at_high_eccentricity(self):
        for M in (0.01, 1.0, math.pi, 5.0):
            assert solve_kepler(M, 0.95) == pytest.approx(kepler_bisect(M, 0.95), abs=1e-9)

    def test_invalid_eccentricity(self):
        with pytest.raises(ValueError):
            solve_kepler(1.0, 1.0)


class TestPropagate:
    def test_circular_orbit_identities(self):
        el = elements(a=26560.0)
        sv = propagate(el, T0)
        assert np.linalg.norm(sv.position) == pytest.approx(26560.0, abs=1e-6)
        assert np.linalg.norm(sv.velocity) == pytest.approx(math.sqrt(MU_EARTH / 26560.0), abs=1e-9)

    def test_geostationary_period_closure(self):
        el = elements(i=math.radians(1.02), raan=math.radians(209.006))
        period = el.period
        # Table-level check: the orbit is the 23 h 56 min geostationary one
        assert abs(period - (23 * 3600 + 56 * 60)) < 30.0
        start = propagate(el, T0)
        end = propagate(el, T0.shifted(period))
        assert np.linalg.norm(end.position - start.position) < 1e-3   # 1 m
        assert np.linalg.norm(end.velocity - start.velocity) < 1e-6   # 1 mm/s

    def test_energy_conservation_over_48h(self):
        el = elements(a=26560.0, e=0.2, i=math.radians(55.0), raan=1.0, argp=2.0, m0=3.0)
        times = T0.seconds_since_reference + np.linspace(0.0, 48 * 3600.0, 97)
        pos, vel = propagate_series(el, times)
        energy = 0.5 * np.sum(vel ** 2, axis=1) - MU_EARTH / np.linalg.norm(pos, axis=1)
        assert np.max(np.abs(energy - energy[0])) / abs(energy[0]) < 1e-9
        momentum = np.cross(pos, vel)
        drift = np.linalg.norm(momentum - momentum[0], axis=1) / np.linalg.norm(momentum[0])
        assert np.max(drift) < 1e-9

    def test_series_matches_single_epoch_calls(self):
        el = elements(a=29600.318, e=0.01, i=0.9, raan=0.5, argp=1.5, m0=2.5)
        times = T0.seconds_since_reference + np.array([0.0, 1234.5, 86400.0])
        pos, vel = propagate_series(el, times)
        for k, t in enumerate(times):
            sv = propagate(el, EpochTime(t))
            np.testing.assert_allclose(sv.position, pos[k], rtol=0, atol=1e-9)
            np.testing.assert_allclose(sv.velocity, vel[k], rtol=0, atol=1e-12)

    def test_state_vector_energy_helper(self):
        sv = propagate(elements(a=26560.0), T0)
        expected = -MU_EARTH / (2 * 26560.0)   # circular-orbit energy
        assert sv.specific_energy() == pytest.approx(expected, rel=1e-12)

    def test_element_validation(self):
        with pytest.raises(ValueError):
            elements(a=6000.0)
        with pytest.raises(ValueError):
            elements(e=1.0)
        el = elements(raan=7.0)   # normalized into [0, 2pi)
        assert 0.0 <= el.raan < TWO_PI


class TestWalker:
    def test_27_3_1_structure(self):
        spec = WalkerSpec(27, 3, 1, 29600.318, math.radians(56.0))
        els = generate_walker(spec, T0)
        assert len(els) == 27
        raans = sorted({round(math.degrees(e.raan), 9) for e in els})
        assert raans == pytest.approx([0.0, 120.0, 240.0])
        plane0 = [math.degrees(e.mean_anomaly_at_epoch) for e in els[:9]]
        assert np.allclose(np.diff(plane0), 40.0)
        # adjacent planes phased by f * 360 / t
        assert math.degrees(els[9].mean_anomaly_at_epoch) == pytest.approx(360.0 / 27.0)
        assert {e.semi_major_axis for e in els} == {29600.318}
        assert {e.eccentricity for e in els} == {0.0}

    def test_4_4_0_structure(self):
        els = generate_walker(WalkerSpec(4, 4, 0, 26560.0, 0.9), T0)
        assert len(els) == 4
        assert [round(math.degrees(e.raan), 6) for e in els] == [0.0, 90.0, 180.0, 270.0]
        assert all(e.mean_anomaly_at_epoch == 0.0 for e in els)

    def test_anomaly_offset_translates(self):
        spec = WalkerSpec(27, 3, 1, 29600.318, math.radians(56.0))
        base = generate_walker(spec, T0)
        delta = 0.321
        shifted_spec = WalkerSpec(27, 3, 1, 29600.318, math.radians(56.0), anomaly_offset=delta)
        shifted = generate_walker(shifted_spec, T0)
        for a, b in zip(base, shifted):
            diff = (b.mean_anomaly_at_epoch - a.mean_anomaly_at_epoch) % TWO_PI
            assert diff == pytest.approx(delta, abs=1e-12)

    def test_walker_symmetry_closure(self):
        # shifting RAAN by 2pi/p and anomaly by f*2pi/t maps the set onto itself
        spec = WalkerSpec(27, 3, 1, 29600.318, math.radians(56.0))
        els = generate_walker(spec, T0)
        original = {(round(e.raan, 9) % round(TWO_PI, 9), round(e.mean_anomaly_at_epoch, 9))
                    for e in els}
        shifted = {(round((e.raan + TWO_PI / 3) % TWO_PI, 9),
                    round((e.mean_anomaly_at_epoch + TWO_PI / 27) % TWO_PI, 9))
                   for e in els}
        original = {(round(r % TWO_PI, 6), round(m % TWO_PI, 6)) for r, m in original}
        shifted = {(round(r % TWO_PI, 6), round(m % TWO_PI, 6)) for r, m in shifted}
        assert original == shifted

    def test_invalid_walker(self):
        with pytest.raises(InvalidWalker):
            WalkerSpec(27, 4, 1, 29600.318, 1.0)
        with pytest.raises(InvalidWalker):
            WalkerSpec(27, 3, 3, 29600.318, 1.0)


class TestLocalOrbitalFrame:
    def setup_method(self):
        self.state = propagate(elements(a=42166.892, i=math.radians(1.02)), T0)

    def test_vector_on_radial(self):
        radial = self.state.position / np.linalg.norm(self.state.position)
        local = eci_to_local_orbital(self.state, radial * 7.5)
        np.testing.assert_allclose(local, [7.5, 0.0, 0.0], atol=1e-12)

    def test_zero_vector(self):
        np.testing.assert_array_equal(eci_to_local_orbital(self.state, np.zeros(3)), np.zeros(3))

    def test_rotation_orthonormal(self):
        R = local_orbital_rotation(self.state)
        np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_frame(self):
        bad = StateVector(np.array([42164.0, 0.0, 0.0]), np.array([3.0, 0.0, 0.0]), T0)
        with pytest.raises(DegenerateFrame):
            local_orbital_rotation(bad)
