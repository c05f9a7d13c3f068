"""Flat dotted-key configuration for the CLI.

Config files are plain text, one ``key = value`` per line, ``#`` comments.
Every key has a typed default below; unknown keys are rejected with the key
name and source line so typos never silently fall back to defaults.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Any, Callable

from .channel import ClusterModel, ScenarioConfig
from .experiment import (ARCH_LABELS, ExperimentConfig, PowerSweepConfig)
from .link import LinkBudget
from .power import ComponentCatalog


class ConfigError(Exception):
    """Bad key, bad value, or violated invariant; maps to exit code 2."""


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(tok.strip().lower() for tok in text.split(",") if tok.strip())


def _parse_sweep(text: str) -> tuple[float, ...]:
    """Either comma-separated dBm values or an inclusive start:stop:step range."""
    t = text.strip()
    if ":" in t:
        parts = t.split(":")
        if len(parts) != 3:
            raise ValueError("range sweep must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("sweep step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise ValueError("empty sweep range")
        return tuple(start + i * step for i in range(n))
    return tuple(float(tok) for tok in t.replace(",", " ").split())


# key -> (parser, default)
_REGISTRY: dict[str, tuple[Callable[[str], Any], Any]] = {
    # deployment scenario
    "scenario.kind": (str.lower, "fwa"),
    "scenario.n_users": (int, 10),
    "scenario.bs_height_m": (float, 30.0),
    "scenario.carrier_frequency_hz": (float, 28.0e9),
    "scenario.sector_halfwidth_deg": (float, 60.0),
    "scenario.min_distance_m": (float, 10.0),
    "scenario.max_distance_m": (float, 300.0),
    "scenario.user_height_min_m": (float, 10.0),
    "scenario.user_height_max_m": (float, 20.0),
    "scenario.road_length_m": (float, 400.0),
    "scenario.crossroad_offset_m": (float, 20.0),
    "scenario.min_ground_distance_m": (float, 10.0),
    # antenna arrays
    "arrays.bs_antennas": (int, 64),
    "arrays.ue_antennas": (int, 64),
    "arrays.spacing_wavelengths": (float, 0.5),
    # multipath model
    "channel.n_clusters": (int, 3),
    "channel.cluster_power_offset_db": (float, 10.0),
    "channel.angle_spread_deg": (float, 10.0),
    "channel.pathloss_exponent": (float, 2.0),
    # link budget
    "link.bandwidth_hz": (float, 200.0e6),
    "link.noise_psd_dbm_hz": (float, -174.0),
    "link.noise_figure_db": (float, 5.0),
    # beamforming
    "beamform.streams_per_user": (int, 1),
    "beamform.phase_bits": (int, 0),
    # experiment loop
    "experiment.architectures": (_parse_str_list, ARCH_LABELS),
    "experiment.n_drops": (int, 50),
    "experiment.master_seed": (int, 0),
    "experiment.sweep_dbm": (_parse_sweep,
                             tuple(float(p) for p in range(-10, 32, 2))),
    # component catalog (mW unless noted)
    "power.dac_ref_bs_mw": (float, 43.0),
    "power.dac_ref_mt_mw": (float, 3.0),
    "power.adc_ref_bs_mw": (float, 172.0),
    "power.adc_ref_mt_mw": (float, 11.0),
    "power.bs_adc_bits": (int, 12),
    "power.bs_dac_bits": (int, 10),
    "power.mt_adc_bits": (int, 8),
    "power.mt_dac_bits": (int, 6),
    "power.lo_mw": (float, 30.0),
    "power.per_chain_lo_mw": (float, 15.0),
    "power.lpf_tx_mw": (float, 0.5),
    "power.lpf_rx_mw": (float, 1.6),
    "power.lna_analog_mw": (float, 36.0),
    "power.lna_digital_mw": (float, 5.6),
    "power.vga_mw": (float, 1.3),
    "power.phase_shifter_il_db": (float, 8.0),  # dB
    "power.tx_driver_mw": (float, 75.0),
    "power.pa_efficiency": (float, 0.15),       # fraction
    "power.ref_sample_rate_hz": (float, 200.0e6),
    "power.bs_radiated_dbm": (float, 30.0),     # dBm
    "power.mt_radiated_dbm": (float, 18.0),     # dBm
    # antenna sweep of the power model
    "powersweep.antennas": (_parse_int_list,
                            (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)),
    "powersweep.kinds": (_parse_str_list, ("analog", "hybrid", "digital")),
    "powersweep.devices": (_parse_str_list, ("bs", "mt")),
    "powersweep.n_rf": (int, 3),
}

PRESETS: dict[str, dict[str, str]] = {
    # 64x64 fixed-wireless-access sector, throughput/EE frontier
    "fwa-fig5": {
        "scenario.kind": "fwa",
        "scenario.n_users": "10",
        "arrays.bs_antennas": "64",
        "arrays.ue_antennas": "64",
    },
    # 256x64 street crossing with 32 vehicles
    "v2i-fig6": {
        "scenario.kind": "v2i",
        "scenario.n_users": "32",
        "scenario.bs_height_m": "15",
        "scenario.user_height_min_m": "1.65",
        "scenario.user_height_max_m": "1.65",
        "arrays.bs_antennas": "256",
        "arrays.ue_antennas": "64",
    },
    # consumption vs antenna count for both devices, 3-chain hybrid
    "power-fig3": {
        "powersweep.antennas": "1,2,4,8,16,32,64,128,256,512,1024",
        "powersweep.kinds": "analog,hybrid,digital",
        "powersweep.devices": "bs,mt",
        "powersweep.n_rf": "3",
    },
}


def default_config() -> dict[str, Any]:
    return {key: default for key, (_, default) in _REGISTRY.items()}


def set_key(cfg: dict[str, Any], key: str, raw: str,
            where: str = "--set") -> None:
    if key not in _REGISTRY:
        raise ConfigError(f"unknown configuration key {key!r} ({where})")
    parser, _ = _REGISTRY[key]
    try:
        cfg[key] = parser(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {key!r} ({where}): {exc}") from exc


def load_config_file(cfg: dict[str, Any], path: str) -> None:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        set_key(cfg, key, raw, where=f"{path}:{lineno}")


def apply_preset(cfg: dict[str, Any], name: str) -> None:
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError(f"unknown preset {name!r} (known: {known})")
    for key, raw in PRESETS[name].items():
        set_key(cfg, key, raw, where=f"preset {name}")


def resolve(preset: str | None = None, config_path: str | None = None,
            sets: list[str] | None = None) -> dict[str, Any]:
    """Layer defaults <- preset <- config file <- --set overrides."""
    cfg = default_config()
    if preset:
        apply_preset(cfg, preset)
    if config_path:
        load_config_file(cfg, config_path)
    for item in sets or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = (part.strip() for part in item.split("=", 1))
        set_key(cfg, key, raw)
    return cfg


def _build(factory, kwargs, context: str):
    try:
        return factory(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def build_scenario(cfg: dict[str, Any]) -> ScenarioConfig:
    fields = {f.name for f in dataclasses.fields(ScenarioConfig)}
    kwargs = {k.split(".", 1)[1]: v for k, v in cfg.items()
              if k.startswith("scenario.") and k.split(".", 1)[1] in fields}
    return _build(ScenarioConfig, kwargs, "scenario")


def build_catalog(cfg: dict[str, Any]) -> ComponentCatalog:
    fields = {f.name for f in dataclasses.fields(ComponentCatalog)}
    kwargs = {k.split(".", 1)[1]: v for k, v in cfg.items()
              if k.startswith("power.") and k.split(".", 1)[1] in fields}
    return _build(ComponentCatalog, kwargs, "power catalog")


def build_experiment(cfg: dict[str, Any]) -> ExperimentConfig:
    scenario = build_scenario(cfg)
    cluster = _build(ClusterModel, dict(
        n_clusters=cfg["channel.n_clusters"],
        cluster_power_offset_db=cfg["channel.cluster_power_offset_db"],
        angle_spread_deg=cfg["channel.angle_spread_deg"],
        pathloss_exponent=cfg["channel.pathloss_exponent"],
    ), "channel model")
    budget = _build(LinkBudget, dict(
        bandwidth_hz=cfg["link.bandwidth_hz"],
        noise_psd_dbm_hz=cfg["link.noise_psd_dbm_hz"],
        noise_figure_db=cfg["link.noise_figure_db"],
    ), "link budget")
    return _build(ExperimentConfig, dict(
        scenario=scenario,
        cluster=cluster,
        budget=budget,
        catalog=build_catalog(cfg),
        bs_antennas=cfg["arrays.bs_antennas"],
        ue_antennas=cfg["arrays.ue_antennas"],
        spacing_wavelengths=cfg["arrays.spacing_wavelengths"],
        architectures=tuple(cfg["experiment.architectures"]),
        streams_per_user=cfg["beamform.streams_per_user"],
        phase_bits=cfg["beamform.phase_bits"],
        n_drops=cfg["experiment.n_drops"],
        master_seed=cfg["experiment.master_seed"],
        sweep_dbm=tuple(cfg["experiment.sweep_dbm"]),
        mt_radiated_dbm=cfg["power.mt_radiated_dbm"],
    ), "experiment")


def build_power_sweep(cfg: dict[str, Any]) -> PowerSweepConfig:
    return _build(PowerSweepConfig, dict(
        catalog=build_catalog(cfg),
        antennas=tuple(cfg["powersweep.antennas"]),
        kinds=tuple(cfg["powersweep.kinds"]),
        devices=tuple(cfg["powersweep.devices"]),
        hybrid_n_rf=cfg["powersweep.n_rf"],
        bs_radiated_dbm=cfg["power.bs_radiated_dbm"],
        mt_radiated_dbm=cfg["power.mt_radiated_dbm"],
    ), "power sweep")
