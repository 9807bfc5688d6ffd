"""Free-space link budget: FSPL and received carrier-to-noise density."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna import AntennaPattern
from .constants import BOLTZMANN_DBW, C_LIGHT
from .errors import InvalidInput


@dataclass(frozen=True)
class CarrierBand:
    name: str
    frequency_mhz: float


# Carrier frequencies of the supported GPS/Galileo signals.
BANDS = {
    "L1": CarrierBand("L1", 1575.42),
    "L2": CarrierBand("L2", 1227.6),
    "L5": CarrierBand("L5", 1176.45),
    "E1": CarrierBand("E1", 1575.42),
    "E5": CarrierBand("E5", 1191.795),
}


@dataclass(frozen=True)
class LinkBudgetConfig:
    """One directional RF link: transmit side, receive side, noise."""

    tx_power_dbw: float
    tx_pattern: AntennaPattern
    rx_pattern: AntennaPattern
    system_noise_temperature_k: float
    tx_margin_db: float = 0.0
    fixed_loss_db: float = 0.0   # polarization + implementation losses, lumped

    def __post_init__(self):
        if self.system_noise_temperature_k <= 0:
            raise InvalidInput(f"noise temperature must be positive, got {self.system_noise_temperature_k}")
        if not 0.0 <= self.tx_margin_db <= 7.0:
            raise InvalidInput(f"tx margin {self.tx_margin_db} dB outside the [0, 7] policy range")


def free_space_path_loss(distance_km, frequency_mhz):
    """FSPL = 20*log10(4*pi*d*f/c) in dB. Scalar or array distance."""
    d = np.asarray(distance_km, dtype=float)
    if np.any(d <= 0) or frequency_mhz <= 0:
        raise InvalidInput(f"need positive distance and frequency, got d={distance_km}, f={frequency_mhz}")
    out = 20.0 * np.log10(4.0 * math.pi * d * 1e3 * frequency_mhz * 1e6 / C_LIGHT)
    return float(out) if out.ndim == 0 else out


def carrier_to_noise_density(cfg: LinkBudgetConfig, band: CarrierBand,
                             tx_off_boresight_deg, rx_off_boresight_deg, range_km):
    """Received C/N0 in dBHz.

    C/N0 = P_tx + margin + G_tx + G_rx - FSPL - fixed_loss
           - 10*log10(k) - 10*log10(T_sys)
    """
    fspl = free_space_path_loss(range_km, band.frequency_mhz)
    out = (cfg.tx_power_dbw + cfg.tx_margin_db
           + cfg.tx_pattern.gain(tx_off_boresight_deg)
           + cfg.rx_pattern.gain(rx_off_boresight_deg)
           - fspl - cfg.fixed_loss_db
           - BOLTZMANN_DBW
           - 10.0 * math.log10(cfg.system_noise_temperature_k))
    return float(out) if np.ndim(out) == 0 else out
