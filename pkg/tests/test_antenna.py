import math

import numpy as np
import pytest

from geognss.antenna import (AntennaPattern, default_tx_pattern, parabolic_pattern,
                             parse_pattern, pattern_gain)
from geognss.errors import InvalidAntenna, OutOfRange


def test_paper_receive_dish_pinned_values():
    # 0.25 m dish at L1 with the measured axis gain and 56 deg full 3 dB width
    pat = parabolic_pattern(0.25, 0.6, 1575.42, theta_3db_deg=56.0, boresight_gain_dbi=9.25)
    assert pat.gain(0.0) == pytest.approx(9.25, abs=1e-9)
    # down 3 dB at half the full width
    assert pat.gain(28.0) == pytest.approx(9.25 - 3.0, abs=1e-9)
    assert pat.gain(180.0) == -10.0   # floor


def test_aperture_formula_gain():
    # frozen from 10*log10(eta*(pi*D*f/c)^2)
    pat = parabolic_pattern(0.25, 0.6, 1575.42)
    assert pat.gain(0.0) == pytest.approx(10.094823163573778, abs=1e-9)


def test_efficiency_scaling():
    lossy = parabolic_pattern(0.25, 0.6, 1575.42, theta_3db_deg=56.0)
    ideal = parabolic_pattern(0.25, 1.0, 1575.42, theta_3db_deg=56.0)
    scale = 10 * math.log10(1 / 0.6)
    for angle in np.arange(0.0, 60.0, 2.5):
        assert ideal.gain(angle) - lossy.gain(angle) == pytest.approx(scale, abs=1e-9)


def test_invalid_antenna_inputs():
    with pytest.raises(InvalidAntenna):
        parabolic_pattern(0.0, 0.6, 1575.42)
    with pytest.raises(InvalidAntenna):
        parabolic_pattern(0.25, 0.0, 1575.42)
    with pytest.raises(InvalidAntenna):
        parabolic_pattern(0.25, 1.2, 1575.42)


class TestPatternGain:
    def test_exact_at_nodes(self):
        pat = AntennaPattern(np.array([0.0, 10.0, 180.0]), np.array([10.0, 0.0, -5.0]))
        assert pattern_gain(pat, 10.0) == 0.0
        assert pattern_gain(pat, 0.0) == 10.0

    def test_midpoint(self):
        pat = AntennaPattern(np.array([0.0, 10.0, 180.0]), np.array([10.0, 0.0, 0.0]))
        assert pattern_gain(pat, 5.0) == pytest.approx(5.0)

    def test_bounded_by_bracketing_nodes(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(3, 12))
            angles = np.concatenate([[0.0], np.sort(rng.uniform(1.0, 179.0, n - 2)), [180.0]])
            gains = rng.uniform(-30.0, 20.0, n)
            pat = AntennaPattern(angles, gains)
            for angle in rng.uniform(0.0, 180.0, 20):
                left = np.searchsorted(angles, angle, side="right") - 1
                right = min(left + 1, n - 1)
                lo = min(gains[left], gains[right])
                hi = max(gains[left], gains[right])
                g = pattern_gain(pat, float(angle))
                assert lo - 1e-12 <= g <= hi + 1e-12

    def test_out_of_range(self):
        pat = AntennaPattern(np.array([0.0, 180.0]), np.array([0.0, 0.0]))
        with pytest.raises(OutOfRange):
            pattern_gain(pat, -0.1)
        with pytest.raises(OutOfRange):
            pattern_gain(pat, 180.1)


class TestPatternTable:
    def test_validation(self):
        with pytest.raises(InvalidAntenna):
            AntennaPattern(np.array([0.0, 5.0]), np.array([1.0, 2.0]))   # must end at 180
        with pytest.raises(InvalidAntenna):
            AntennaPattern(np.array([1.0, 180.0]), np.array([1.0, 2.0]))  # must start at 0
        with pytest.raises(InvalidAntenna):
            AntennaPattern(np.array([0.0, 5.0, 5.0, 180.0]), np.array([1.0, 2.0, 3.0, 4.0]))

    def test_parse_pattern_file_format(self):
        text = "# comment\n0.0 13.4\n30.0 -1.6   # inline comment\n180.0 -30.0\n"
        pat = parse_pattern(text, name="t")
        assert pat.gain(30.0) == pytest.approx(-1.6)
        with pytest.raises(InvalidAntenna):
            parse_pattern("0.0 1.0 extra\n180.0 0.0\n")
        with pytest.raises(InvalidAntenna):
            parse_pattern("0.0 abc\n180.0 0.0\n")


class TestDefaultTransmitPattern:
    def test_loads_and_spans_sphere(self):
        pat = default_tx_pattern()
        assert pat.angles_deg[0] == 0.0 and pat.angles_deg[-1] == 180.0

    def test_main_to_side_lobe_separation(self):
        # secondary lobe sits 15 +/- 3 dB below the main lobe
        pat = default_tx_pattern()
        grid = np.arange(0.0, 180.01, 0.1)
        gains = pat.gain(grid)
        main = gains[grid <= 23.3].max()
        side = gains[(grid >= 26.0) & (grid <= 60.0)].max()
        assert 12.0 <= main - side <= 18.0

    def test_continuity(self):
        pat = default_tx_pattern()
        grid = np.arange(0.0, 180.0, 0.05)
        gains = pat.gain(grid)
        # linear interpolation of a bounded table: increments shrink with the step
        assert np.max(np.abs(np.diff(gains))) < 1.0
