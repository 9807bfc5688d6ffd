"""Scenario configuration: strict TOML ingestion and normalization.

The file is flat key/value pairs plus one [[constellation]] table per
constellation. Unknown keys are rejected outright so a typo cannot
silently fall back to a default in a long batch run. All paths resolve
relative to the directory containing the scenario file.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:                       # Python 3.10
    import tomli as tomllib

from .antenna import AntennaPattern, default_tx_pattern, load_pattern_file, parabolic_pattern
from .errors import MissingFile, ParseError, ValidationError
from .linkbudget import BANDS, CarrierBand, LinkBudgetConfig
from .navmetrics import ErrorModel
from .orbits import KeplerianElements, WalkerSpec, generate_walker
from .timebase import EpochTime
from .tle import parse_tle
from .tracking import TrackThresholds

_TOP_KEYS = {
    "name": str,
    "start": str,
    "duration_s": float,
    "step_s": float,
    "mask_altitude_km": float,
    "acquisition_dbhz": float,
    "tracking_dbhz": float,
    "min_dwell_s": float,
    "uere_m": float,
    "output_dir": str,
    "doppler_dt_s": float,
    "doppler_hist_bin_hz": float,
    "doppler_hist_span_hz": float,
    "receiver_name": str,
    "receiver_semi_major_axis_km": float,
    "receiver_eccentricity": float,
    "receiver_inclination_deg": float,
    "receiver_raan_deg": float,
    "receiver_arg_perigee_deg": float,
    "receiver_mean_anomaly_deg": float,
    "receiver_epoch": str,
    "receiver_tle_file": str,
    "receiver_tle_name": str,
    "constellation": list,
}

_CONSTELLATION_KEYS = {
    "name": str,
    "band": str,
    "source": str,
    "tle_file": str,
    "walker_total": int,
    "walker_planes": int,
    "walker_phasing": int,
    "walker_semi_major_axis_km": float,
    "walker_inclination_deg": float,
    "walker_raan_offset_deg": float,
    "walker_anomaly_offset_deg": float,
    "tx_power_dbw": float,
    "tx_margin_db": float,
    "system_noise_temp_k": float,
    "fixed_loss_db": float,
    "tx_pattern_file": str,
    "rx_pattern_file": str,
    "rx_diameter_m": float,
    "rx_efficiency": float,
    "rx_frequency_mhz": float,
    "rx_boresight_gain_dbi": float,
    "rx_theta_3db_deg": float,
    "rx_floor_dbi": float,
}

_DEFAULTS = {
    "name": "scenario",
    "step_s": 60.0,
    "mask_altitude_km": 1000.0,
    "acquisition_dbhz": 29.0,
    "tracking_dbhz": 27.0,
    "min_dwell_s": 0.0,
    "uere_m": 5.0,
    "output_dir": "out",
    "doppler_dt_s": 1.0,
    "doppler_hist_bin_hz": 250.0,
    "doppler_hist_span_hz": 12000.0,
    "receiver_name": "receiver",
    "receiver_eccentricity": 0.0,
    "receiver_arg_perigee_deg": 0.0,
    "receiver_mean_anomaly_deg": 0.0,
}

_CONSTELLATION_DEFAULTS = {
    "band": "L1",
    "tx_power_dbw": 14.3,
    "tx_margin_db": 0.0,
    "system_noise_temp_k": 290.0,
    "fixed_loss_db": 0.0,
    "rx_diameter_m": 0.25,
    "rx_efficiency": 0.6,
    "rx_boresight_gain_dbi": 9.25,
    "rx_theta_3db_deg": 56.0,
    "rx_floor_dbi": -10.0,
}


@dataclass(frozen=True)
class SatelliteDef:
    sat_id: str
    elements: KeplerianElements


@dataclass(frozen=True)
class ConstellationConfig:
    name: str
    band: CarrierBand
    satellites: tuple[SatelliteDef, ...]
    link: LinkBudgetConfig
    echo: dict


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    receiver_name: str
    receiver: KeplerianElements
    constellations: tuple[ConstellationConfig, ...]
    thresholds: TrackThresholds
    mask_altitude_km: float
    start: EpochTime
    duration_s: float
    step_s: float
    error_model: ErrorModel
    output_dir: Path
    doppler_dt_s: float
    doppler_hist_bin_hz: float
    doppler_hist_span_hz: float
    source_path: Path
    source_bytes: bytes
    echo: dict

    @property
    def epoch_count(self) -> int:
        return int(round(self.duration_s / self.step_s))


def _coerce(key: str, value, want, where: str):
    if want is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"{where}{key}", f"expected a number, got {value!r}")
        return float(value)
    if want is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"{where}{key}", f"expected an integer, got {value!r}")
        return value
    if not isinstance(value, want):
        raise ValidationError(f"{where}{key}", f"expected {want.__name__}, got {value!r}")
    return value


def _check_keys(table: dict, allowed: dict, where: str) -> dict:
    out = {}
    for key, value in table.items():
        if key not in allowed:
            raise ParseError(f"unknown key {where}{key!r}")
        out[key] = _coerce(key, value, allowed[key], where)
    return out


def _require(table: dict, key: str, where: str = ""):
    if key not in table:
        raise ValidationError(f"{where}{key}", "required key is missing")
    return table[key]


def _parse_epoch(text: str, field_name: str) -> EpochTime:
    try:
        return EpochTime.from_iso(text)
    except ValueError as exc:
        raise ValidationError(field_name, f"not an ISO date-time: {exc}") from exc


def _resolve(base: Path, name: str, field_name: str) -> Path:
    path = (base / name).resolve() if not Path(name).is_absolute() else Path(name)
    if not path.is_file():
        raise MissingFile(f"{field_name}: {path} does not exist")
    return path


def _load_receiver(cfg: dict, base: Path, start: EpochTime) -> tuple[KeplerianElements, str]:
    if "receiver_tle_file" in cfg:
        path = _resolve(base, cfg["receiver_tle_file"], "receiver_tle_file")
        records, warnings = parse_tle(path.read_text())
        if warnings:
            raise ValidationError("receiver_tle_file", "; ".join(warnings))
        wanted = cfg.get("receiver_tle_name")
        if wanted:
            matches = [r for r in records if r.satellite_name == wanted]
            if not matches:
                raise ValidationError("receiver_tle_name", f"{wanted!r} not found in {path.name}")
            rec = matches[0]
        elif len(records) == 1:
            rec = records[0]
        else:
            raise ValidationError("receiver_tle_name",
                                  f"{path.name} holds {len(records)} records, name required")
        return rec.elements, (rec.satellite_name or cfg.get("receiver_name", "receiver"))

    epoch = (_parse_epoch(cfg["receiver_epoch"], "receiver_epoch")
             if "receiver_epoch" in cfg else start)
    try:
        elements = KeplerianElements(
            semi_major_axis=_require(cfg, "receiver_semi_major_axis_km"),
            eccentricity=cfg["receiver_eccentricity"],
            inclination=math.radians(_require(cfg, "receiver_inclination_deg")),
            raan=math.radians(_require(cfg, "receiver_raan_deg")),
            arg_perigee=math.radians(cfg["receiver_arg_perigee_deg"]),
            mean_anomaly_at_epoch=math.radians(cfg["receiver_mean_anomaly_deg"]),
            epoch=epoch,
        )
    except ValueError as exc:
        raise ValidationError("receiver", str(exc)) from exc
    return elements, cfg["receiver_name"]


def _rx_pattern(table: dict, base: Path) -> AntennaPattern:
    if "rx_pattern_file" in table:
        return load_pattern_file(_resolve(base, table["rx_pattern_file"], "rx_pattern_file"))
    return parabolic_pattern(
        table["rx_diameter_m"], table["rx_efficiency"],
        table.get("rx_frequency_mhz", BANDS[table["band"]].frequency_mhz),
        theta_3db_deg=table["rx_theta_3db_deg"],
        boresight_gain_dbi=table["rx_boresight_gain_dbi"],
        floor_dbi=table["rx_floor_dbi"],
    )


def _load_constellation(index: int, table: dict, base: Path, start: EpochTime) -> ConstellationConfig:
    where = f"constellation[{index}]."
    table = _check_keys(table, _CONSTELLATION_KEYS, where)
    merged = dict(_CONSTELLATION_DEFAULTS)
    merged.update(table)
    name = _require(merged, "name", where)
    if merged["band"] not in BANDS:
        raise ValidationError(where + "band",
                              f"{merged['band']!r} not one of {sorted(BANDS)}")
    band = BANDS[merged["band"]]

    source = _require(merged, "source", where)
    sats: list[SatelliteDef] = []
    if source == "tle":
        path = _resolve(base, _require(merged, "tle_file", where), where + "tle_file")
        records, warnings = parse_tle(path.read_text())
        if warnings:
            raise ValidationError(where + "tle_file", "; ".join(warnings))
        if not records:
            raise ValidationError(where + "tle_file", f"{path.name} holds no records")
        for rec in records:
            sat_id = rec.satellite_name or f"{name}-{rec.catalog_number}"
            sats.append(SatelliteDef(sat_id, rec.elements))
    elif source == "walker":
        try:
            spec = WalkerSpec(
                total_sats=_require(merged, "walker_total", where),
                planes=_require(merged, "walker_planes", where),
                phasing=_require(merged, "walker_phasing", where),
                semi_major_axis=_require(merged, "walker_semi_major_axis_km", where),
                inclination=math.radians(_require(merged, "walker_inclination_deg", where)),
                raan_offset=math.radians(merged.get("walker_raan_offset_deg", 0.0)),
                anomaly_offset=math.radians(merged.get("walker_anomaly_offset_deg", 0.0)),
            )
        except ValueError as exc:
            raise ValidationError(where + "walker", str(exc)) from exc
        per_plane = spec.total_sats // spec.planes
        for k, elements in enumerate(generate_walker(spec, start)):
            plane, slot = divmod(k, per_plane)
            sats.append(SatelliteDef(f"{name.upper()}-{plane + 1:02d}{slot + 1:02d}", elements))
    else:
        raise ValidationError(where + "source", f"{source!r} is not 'tle' or 'walker'")

    if "tx_pattern_file" in merged:
        tx_pattern = load_pattern_file(_resolve(base, merged["tx_pattern_file"], where + "tx_pattern_file"))
    else:
        tx_pattern = default_tx_pattern()
    link = LinkBudgetConfig(
        tx_power_dbw=merged["tx_power_dbw"],
        tx_pattern=tx_pattern,
        rx_pattern=_rx_pattern(merged, base),
        system_noise_temperature_k=merged["system_noise_temp_k"],
        tx_margin_db=merged["tx_margin_db"],
        fixed_loss_db=merged["fixed_loss_db"],
    )
    echo = dict(sorted(merged.items()))
    echo["satellite_count"] = len(sats)
    echo["tx_pattern"] = tx_pattern.name
    echo["rx_pattern"] = link.rx_pattern.name
    return ConstellationConfig(name=name, band=band, satellites=tuple(sats),
                               link=link, echo=echo)


def load_scenario(path) -> ScenarioConfig:
    """Load, validate and normalize a scenario file."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path))
    blob = path.read_bytes()
    try:
        data = tomllib.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ParseError(f"{path.name}: {exc}") from exc

    cfg = _check_keys(data, _TOP_KEYS, "")
    merged = dict(_DEFAULTS)
    merged.update(cfg)

    start = _parse_epoch(_require(merged, "start"), "start")
    step_s = merged["step_s"]
    duration_s = _require(merged, "duration_s")
    if step_s <= 0:
        raise ValidationError("step_s", f"must be positive, got {step_s}")
    if duration_s < step_s:
        raise ValidationError("duration_s", f"must be at least one step ({step_s} s)")
    if merged["mask_altitude_km"] < 0:
        raise ValidationError("mask_altitude_km", "must be non-negative")
    try:
        thresholds = TrackThresholds(merged["acquisition_dbhz"], merged["tracking_dbhz"],
                                     merged["min_dwell_s"])
        error_model = ErrorModel(merged["uere_m"])
    except ValueError as exc:
        raise ValidationError("thresholds", str(exc)) from exc

    base = path.parent
    receiver, receiver_name = _load_receiver(merged, base, start)

    raw_constellations = merged.get("constellation", [])
    if not raw_constellations:
        raise ValidationError("constellation", "at least one constellation is required")
    constellations = []
    for i, tbl in enumerate(raw_constellations):
        if not isinstance(tbl, dict):
            raise ValidationError(f"constellation[{i}]", "expected a table")
        constellations.append(_load_constellation(i, tbl, base, start))
    names = [c.name for c in constellations]
    if len(set(names)) != len(names):
        raise ValidationError("constellation", f"duplicate names {names}")
    if "union" in names:
        raise ValidationError("constellation", "'union' is a reserved subset name")

    echo = {k: v for k, v in sorted(merged.items()) if k != "constellation"}
    echo["constellations"] = [c.echo for c in constellations]
    echo["epoch_count"] = int(round(duration_s / step_s))

    return ScenarioConfig(
        name=merged["name"],
        receiver_name=receiver_name,
        receiver=receiver,
        constellations=tuple(constellations),
        thresholds=thresholds,
        mask_altitude_km=merged["mask_altitude_km"],
        start=start,
        duration_s=duration_s,
        step_s=step_s,
        error_model=error_model,
        output_dir=Path(merged["output_dir"]),
        doppler_dt_s=merged["doppler_dt_s"],
        doppler_hist_bin_hz=merged["doppler_hist_bin_hz"],
        doppler_hist_span_hz=merged["doppler_hist_span_hz"],
        source_path=path,
        source_bytes=blob,
        echo=echo,
    )
