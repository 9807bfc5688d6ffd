"""GNSS reception simulator for geostationary spacecraft.

Deterministic desk-scale evaluation of GPS + Galileo signal reception
above the constellations: two-body orbit propagation, RF link budget to
C/N0, Earth/atmosphere occultation, acquisition/tracking state and
navigation performance metrics (availability, DOP family, Doppler,
position error).
"""

from .antenna import AntennaPattern, default_tx_pattern, parabolic_pattern, pattern_gain
from .engine import LinkSimulation, availability_sweep, gdop_sweep, run, simulate
from .geometry import doppler, doppler_rate, occultation, off_boresight_angles, skyplot_coords
from .linkbudget import BANDS, CarrierBand, LinkBudgetConfig, carrier_to_noise_density, free_space_path_loss
from .navmetrics import ErrorModel, availability, dops, geometry_matrix, percentile, position_error_sigma
from .orbits import (KeplerianElements, StateVector, WalkerSpec, eci_to_local_orbital,
                     generate_walker, propagate, solve_kepler)
from .scenario import ScenarioConfig, load_scenario
from .timebase import EpochTime
from .tle import TleRecord, parse_tle
from .tracking import TrackState, TrackThresholds, run_series, step

__version__ = "0.1.0"
