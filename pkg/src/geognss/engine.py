"""Scenario driver: link simulation over the epoch grid, metrics, outputs.

The run is deterministic by construction: a single-threaded pass over a
fixed epoch grid with no randomness, so identical configs give
byte-identical CSVs. Summary statistics are computed from the same
6-significant-digit values that land in the CSVs, which makes every
report number exactly recomputable from the emitted files.

Two visibility notions are computed and labelled throughout:

* acquisition visibility - C/N0 at or above the acquisition threshold
  and unoccluded (the availability-of-service definition), and
* tracked - the acquisition/tracking hysteresis state machine, which is
  what the navigation metrics (DOP, error sigmas) are evaluated on.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptySeries, GeoGnssError, IoError
from .geometry import (doppler_arrays, local_frames, occultation,
                       off_boresight_angles_arrays, skyplot_series)
from .linkbudget import carrier_to_noise_density
from .navmetrics import availability, dops, geometry_matrix, percentile, position_error_sigma
from .orbits import StateVector, propagate_series
from .scenario import ScenarioConfig
from .timebase import EpochTime
from .tracking import Lock, TrackState, TrackThresholds, step


def fmt(value) -> str:
    """CSV float format: 6 significant digits, empty for UNDEFINED."""
    if value is None:
        return ""
    v = float(value)
    if not math.isfinite(v):
        return ""
    return f"{v:.6g}"


def _rounded(value: float) -> float:
    return float(f"{float(value):.6g}")


_round_array = np.vectorize(_rounded, otypes=[float])


@dataclass(frozen=True)
class SatelliteChannel:
    sat_id: str
    constellation: str
    band_name: str


@dataclass
class LinkSimulation:
    """Per-(satellite, epoch) link quantities for one scenario run."""

    config: ScenarioConfig
    epochs_s: np.ndarray            # (n,)
    epoch_iso: list[str]
    sats: list[SatelliteChannel]
    sat_positions: np.ndarray       # (S, n, 3) ECI km
    rx_positions: np.ndarray        # (n, 3)
    rx_velocities: np.ndarray       # (n, 3)
    range_km: np.ndarray            # (S, n)
    tx_angle_deg: np.ndarray
    rx_angle_deg: np.ndarray
    occluded: np.ndarray            # (S, n) bool
    cn0_dbhz: np.ndarray            # (S, n), NaN while occluded; 6-digit rounded
    doppler_hz: np.ndarray          # 6-digit rounded
    doppler_rate_hz_s: np.ndarray   # 6-digit rounded
    az_deg: np.ndarray
    el_deg: np.ndarray
    tracked: np.ndarray             # (S, n) bool
    subsets: dict                   # name -> (S,) bool mask, insertion-ordered

    @property
    def epoch_count(self) -> int:
        return len(self.epochs_s)

    def acquisition_visible(self, threshold_dbhz: float | None = None) -> np.ndarray:
        """(S, n) mask: unoccluded and emitted C/N0 at/above the threshold."""
        th = (self.config.thresholds.acquisition_dbhz
              if threshold_dbhz is None else threshold_dbhz)
        with np.errstate(invalid="ignore"):
            return (~self.occluded) & (self.cn0_dbhz >= th)


def tracked_matrix(cn0: np.ndarray, occluded: np.ndarray,
                   epochs_s: np.ndarray, th: TrackThresholds) -> np.ndarray:
    """Hysteresis fold over all satellites at once.

    Equivalent to running tracking.run_series per satellite (pinned by a
    test); kept vectorized because the driver folds tens of thousands of
    samples per sweep threshold.
    """
    n_sats, n_epochs = cn0.shape
    state = np.zeros(n_sats, dtype=bool)
    since = np.full(n_sats, -math.inf)
    out = np.zeros((n_sats, n_epochs), dtype=bool)
    with np.errstate(invalid="ignore"):
        acquire = (~occluded) & (cn0 >= th.acquisition_dbhz)
        hold = (~occluded) & (cn0 >= th.tracking_dbhz)
    for k in range(n_epochs):
        want = np.where(state, hold[:, k], acquire[:, k])
        if th.min_dwell_s > 0.0:
            allowed = (epochs_s[k] - since) >= th.min_dwell_s
            want = np.where(allowed, want, state)
        since = np.where(want != state, epochs_s[k], since)
        state = want
        out[:, k] = state
    return out


def simulate(config: ScenarioConfig) -> LinkSimulation:
    """Propagate every body over the grid and evaluate each link."""
    n = config.epoch_count
    t0 = config.start.seconds_since_reference
    epochs_s = t0 + config.step_s * np.arange(n)
    epoch_iso = [EpochTime(t).iso() for t in epochs_s]
    dt = config.doppler_dt_s

    rx_pos, rx_vel = propagate_series(config.receiver, epochs_s)
    rx_pos_m, rx_vel_m = propagate_series(config.receiver, epochs_s - dt)
    rx_pos_p, rx_vel_p = propagate_series(config.receiver, epochs_s + dt)
    frames = local_frames(rx_pos, rx_vel)

    sats: list[SatelliteChannel] = []
    subsets: dict[str, list[bool]] = {c.name: [] for c in config.constellations}
    blocks = {name: [] for name in
              ("pos", "range", "tx_ang", "rx_ang", "occ", "cn0", "dop", "rate", "az", "el")}

    for constellation in config.constellations:
        for sat in constellation.satellites:
            sats.append(SatelliteChannel(sat.sat_id, constellation.name, constellation.band.name))
            for name in subsets:
                subsets[name].append(name == constellation.name)

            pos, vel = propagate_series(sat.elements, epochs_s)
            rel = pos - rx_pos
            rng = np.linalg.norm(rel, axis=1)
            occ, _ = occultation(rx_pos, pos, config.mask_altitude_km)
            tx_ang, rx_ang = off_boresight_angles_arrays(rx_pos, pos)
            cn0 = carrier_to_noise_density(constellation.link, constellation.band,
                                           tx_ang, rx_ang, rng)
            cn0 = np.where(occ, np.nan, cn0)
            shift = doppler_arrays(rx_pos, rx_vel, pos, vel, constellation.band)

            pos_m, vel_m = propagate_series(sat.elements, epochs_s - dt)
            pos_p, vel_p = propagate_series(sat.elements, epochs_s + dt)
            shift_m = doppler_arrays(rx_pos_m, rx_vel_m, pos_m, vel_m, constellation.band)
            shift_p = doppler_arrays(rx_pos_p, rx_vel_p, pos_p, vel_p, constellation.band)
            rate = (shift_p - shift_m) / (2.0 * dt)

            az, el = skyplot_series(frames, rx_pos, pos)

            blocks["pos"].append(pos)
            blocks["range"].append(_round_array(rng))
            blocks["tx_ang"].append(_round_array(tx_ang))
            blocks["rx_ang"].append(_round_array(rx_ang))
            blocks["occ"].append(occ)
            blocks["cn0"].append(np.where(occ, np.nan, _round_array(np.nan_to_num(cn0))))
            blocks["dop"].append(_round_array(shift))
            blocks["rate"].append(_round_array(rate))
            blocks["az"].append(_round_array(az))
            blocks["el"].append(_round_array(el))

    cn0 = np.array(blocks["cn0"])
    occluded = np.array(blocks["occ"])
    tracked = tracked_matrix(cn0, occluded, epochs_s, config.thresholds)

    masks = {name: np.array(flags) for name, flags in subsets.items()}
    masks["union"] = np.ones(len(sats), dtype=bool)

    return LinkSimulation(
        config=config,
        epochs_s=epochs_s,
        epoch_iso=epoch_iso,
        sats=sats,
        sat_positions=np.array(blocks["pos"]),
        rx_positions=rx_pos,
        rx_velocities=rx_vel,
        range_km=np.array(blocks["range"]),
        tx_angle_deg=np.array(blocks["tx_ang"]),
        rx_angle_deg=np.array(blocks["rx_ang"]),
        occluded=occluded,
        cn0_dbhz=cn0,
        doppler_hz=np.array(blocks["dop"]),
        doppler_rate_hz_s=np.array(blocks["rate"]),
        az_deg=np.array(blocks["az"]),
        el_deg=np.array(blocks["el"]),
        tracked=tracked,
        subsets=masks,
    )


@dataclass
class MetricsTable:
    """Per-epoch navigation metrics for one satellite subset."""

    subset: str
    visible: np.ndarray                 # (n,) tracked count
    gdop: np.ndarray                    # (n,), NaN where UNDEFINED
    pdop: np.ndarray
    hdop: np.ndarray
    vdop: np.ndarray
    tdop: np.ndarray
    sigma_r_m: np.ndarray
    sigma_a_m: np.ndarray
    sigma_c_m: np.ndarray

    @property
    def defined(self) -> np.ndarray:
        return np.isfinite(self.gdop)


def compute_metrics(sim: LinkSimulation, subset: str) -> MetricsTable:
    """DOPs and error sigmas over the tracked set of one subset."""
    mask = sim.subsets[subset]
    n = sim.epoch_count
    cols = {k: np.full(n, np.nan) for k in
            ("gdop", "pdop", "hdop", "vdop", "tdop", "sr", "sa", "sc")}
    counts = (sim.tracked & mask[:, None]).sum(axis=0)
    err = sim.config.error_model

    for k in range(n):
        sel = mask & sim.tracked[:, k]
        if int(counts[k]) < 4:
            continue
        rx_state = StateVector(sim.rx_positions[k], sim.rx_velocities[k],
                               EpochTime(sim.epochs_s[k]))
        H = geometry_matrix(rx_state, sim.sat_positions[sel, k, :])
        solution = dops(H)
        if solution is None:
            continue
        sr, sa, sc = position_error_sigma(solution.covariance, err)
        for key, value in (("gdop", solution.gdop), ("pdop", solution.pdop),
                           ("hdop", solution.hdop), ("vdop", solution.vdop),
                           ("tdop", solution.tdop), ("sr", sr), ("sa", sa), ("sc", sc)):
            cols[key][k] = _rounded(value)

    return MetricsTable(subset=subset, visible=counts,
                        gdop=cols["gdop"], pdop=cols["pdop"], hdop=cols["hdop"],
                        vdop=cols["vdop"], tdop=cols["tdop"],
                        sigma_r_m=cols["sr"], sigma_a_m=cols["sa"], sigma_c_m=cols["sc"])


def _subset_summary(sim: LinkSimulation, metrics: MetricsTable) -> dict:
    mask = sim.subsets[metrics.subset]
    acq_counts = (sim.acquisition_visible() & mask[:, None]).sum(axis=0)
    frac_acq, time_acq = availability(acq_counts, sim.config.step_s)
    frac_trk, time_trk = availability(metrics.visible, sim.config.step_s)
    defined = metrics.defined
    summary = {
        "satellites": int(mask.sum()),
        "availability_acquisition": frac_acq,
        "available_time_acquisition_s": time_acq,
        "availability_tracked": frac_trk,
        "available_time_tracked_s": time_trk,
        "defined_epochs": int(defined.sum()),
        "undefined_epochs": int((~defined).sum()),
    }
    if defined.any():
        g = metrics.gdop[defined]
        horizontal = np.sqrt(metrics.sigma_a_m[defined] ** 2 + metrics.sigma_c_m[defined] ** 2)
        spherical = np.sqrt(metrics.sigma_r_m[defined] ** 2
                            + metrics.sigma_a_m[defined] ** 2
                            + metrics.sigma_c_m[defined] ** 2)
        summary.update({
            "mean_gdop": float(g.mean()),
            "gdop_95": percentile(g, 95.0),
            "vertical_error_95_m": percentile(metrics.sigma_r_m[defined], 95.0),
            "horizontal_error_95_m": percentile(horizontal, 95.0),
            "spherical_error_95_m": percentile(spherical, 95.0),
        })
    else:
        summary.update({k: None for k in
                        ("mean_gdop", "gdop_95", "vertical_error_95_m",
                         "horizontal_error_95_m", "spherical_error_95_m")})
    return summary


def build_report(sim: LinkSimulation, metrics: dict[str, MetricsTable]) -> dict:
    config = sim.config
    tracked_dop = sim.doppler_hz[sim.tracked]
    tracked_rate = sim.doppler_rate_hz_s[sim.tracked]
    doppler = {
        "tracked_samples": int(sim.tracked.sum()),
        "min_hz": float(tracked_dop.min()) if tracked_dop.size else None,
        "max_hz": float(tracked_dop.max()) if tracked_dop.size else None,
        "max_abs_rate_hz_s": float(np.abs(tracked_rate).max()) if tracked_rate.size else None,
    }
    return {
        "scenario_name": config.name,
        "receiver": config.receiver_name,
        "config_sha256": hashlib.sha256(config.source_bytes).hexdigest(),
        "start": config.start.iso(),
        "duration_s": config.duration_s,
        "step_s": config.step_s,
        "epochs": sim.epoch_count,
        "uere_m": config.error_model.uere_m,
        "acquisition_dbhz": config.thresholds.acquisition_dbhz,
        "tracking_dbhz": config.thresholds.tracking_dbhz,
        "mask_altitude_km": config.mask_altitude_km,
        "subsets": {name: _subset_summary(sim, table) for name, table in metrics.items()},
        "doppler": doppler,
        "config_echo": config.echo,
    }


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="ascii", newline="\n")
    except OSError as exc:
        raise IoError(str(path), str(exc)) from exc


def emit_timeseries(sim: LinkSimulation, metrics: dict[str, MetricsTable],
                    out_dir: Path) -> list[Path]:
    """Write links, per-subset metrics, skyplot and Doppler histogram CSVs."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    rows = ["epoch_iso,sat_id,constellation,cn0_dbhz,doppler_hz,doppler_rate_hz_s,"
            "tx_angle_deg,rx_angle_deg,range_km,occluded,tracked"]
    for k, iso in enumerate(sim.epoch_iso):
        for s, sat in enumerate(sim.sats):
            rows.append(",".join((
                iso, sat.sat_id, sat.constellation,
                fmt(sim.cn0_dbhz[s, k]),
                fmt(sim.doppler_hz[s, k]),
                fmt(sim.doppler_rate_hz_s[s, k]),
                fmt(sim.tx_angle_deg[s, k]),
                fmt(sim.rx_angle_deg[s, k]),
                fmt(sim.range_km[s, k]),
                "true" if sim.occluded[s, k] else "false",
                "true" if sim.tracked[s, k] else "false",
            )))
    path = out_dir / "links.csv"
    _write(path, "\n".join(rows) + "\n")
    written.append(path)

    for name, table in metrics.items():
        rows = ["epoch_iso,visible,gdop,pdop,hdop,vdop,tdop,sigma_r_m,sigma_a_m,sigma_c_m"]
        for k, iso in enumerate(sim.epoch_iso):
            rows.append(",".join((
                iso, str(int(table.visible[k])),
                fmt(table.gdop[k]), fmt(table.pdop[k]), fmt(table.hdop[k]),
                fmt(table.vdop[k]), fmt(table.tdop[k]),
                fmt(table.sigma_r_m[k]), fmt(table.sigma_a_m[k]), fmt(table.sigma_c_m[k]),
            )))
        path = out_dir / f"metrics_{name}.csv"
        _write(path, "\n".join(rows) + "\n")
        written.append(path)

    rows = ["epoch_iso,sat_id,az_deg,el_deg,tracked"]
    for k, iso in enumerate(sim.epoch_iso):
        for s, sat in enumerate(sim.sats):
            rows.append(",".join((
                iso, sat.sat_id,
                fmt(sim.az_deg[s, k]), fmt(sim.el_deg[s, k]),
                "true" if sim.tracked[s, k] else "false",
            )))
    path = out_dir / "skyplot.csv"
    _write(path, "\n".join(rows) + "\n")
    written.append(path)

    span = sim.config.doppler_hist_span_hz
    width = sim.config.doppler_hist_bin_hz
    edges = np.arange(-span, span + width / 2, width)
    counts, _ = np.histogram(sim.doppler_hz[sim.tracked], bins=edges)
    rows = ["bin_low_hz,bin_high_hz,count"]
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        rows.append(f"{fmt(lo)},{fmt(hi)},{int(c)}")
    path = out_dir / "doppler_hist.csv"
    _write(path, "\n".join(rows) + "\n")
    written.append(path)

    return written


def run(config: ScenarioConfig, out_dir: Path | None = None) -> dict:
    """Full pipeline: simulate, metrics, emit files, return the report."""
    sim = simulate(config)
    subset_names = [c.name for c in config.constellations] + ["union"]
    metrics = {name: compute_metrics(sim, name) for name in subset_names}
    report = build_report(sim, metrics)
    target = Path(out_dir) if out_dir is not None else config.output_dir
    if not target.is_absolute():
        target = config.source_path.parent / target
    files = emit_timeseries(sim, metrics, target)
    report_path = target / "run_report.json"
    _write(report_path, json.dumps(report, indent=2, sort_keys=False) + "\n")
    files.append(report_path)
    report["files"] = [str(p) for p in files]
    return report


def availability_sweep(sim: LinkSimulation, thresholds: list[float],
                       min_sats: int = 4) -> dict:
    """Availability per subset for each acquisition threshold.

    The acquisition column follows the availability-of-service definition
    (C/N0 at or above the threshold); the tracked column re-runs the
    hysteresis fold keeping the configured acquisition-tracking gap.
    """
    gap = (sim.config.thresholds.acquisition_dbhz
           - sim.config.thresholds.tracking_dbhz)
    dwell = sim.config.thresholds.min_dwell_s
    table: dict[str, list] = {"threshold_dbhz": list(thresholds)}
    for name in sim.subsets:
        table[f"{name}_acquisition"] = []
        table[f"{name}_tracked"] = []
    for th in thresholds:
        acq = sim.acquisition_visible(th)
        trk = tracked_matrix(sim.cn0_dbhz, sim.occluded, sim.epochs_s,
                             TrackThresholds(th, th - gap, dwell))
        for name, mask in sim.subsets.items():
            frac_a, _ = availability((acq & mask[:, None]).sum(axis=0), sim.config.step_s, min_sats)
            frac_t, _ = availability((trk & mask[:, None]).sum(axis=0), sim.config.step_s, min_sats)
            table[f"{name}_acquisition"].append(frac_a)
            table[f"{name}_tracked"].append(frac_t)
    return table


def gdop_sweep(sim: LinkSimulation, thresholds: list[float]) -> dict:
    """95th-percentile GDOP per subset for each acquisition threshold.

    Satellite sets follow the acquisition-visibility definition so the
    sweep needs no per-threshold hysteresis refold.
    """
    table: dict[str, list] = {"threshold_dbhz": list(thresholds)}
    for name in sim.subsets:
        table[f"{name}_gdop95"] = []
    for th in thresholds:
        visible = sim.acquisition_visible(th)
        for name, mask in sim.subsets.items():
            series = []
            for k in range(sim.epoch_count):
                sel = mask & visible[:, k]
                if int(sel.sum()) < 4:
                    continue
                rx_state = StateVector(sim.rx_positions[k], sim.rx_velocities[k],
                                       EpochTime(sim.epochs_s[k]))
                solution = dops(geometry_matrix(rx_state, sim.sat_positions[sel, k, :]))
                if solution is not None:
                    series.append(solution.gdop)
            try:
                table[f"{name}_gdop95"].append(percentile(series, 95.0))
            except EmptySeries:
                table[f"{name}_gdop95"].append(None)
    return table
