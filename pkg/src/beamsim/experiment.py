"""Monte-Carlo experiment runners: throughput/power frontier and power sweep.

Determinism contract: drop d of a run always uses the substream derived from
(master_seed, d), every sweep point reuses the same drops, and aggregation
happens in fixed drop order regardless of how many worker threads computed
the per-drop terms -- so output CSVs are byte-identical for any --threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayGeometry
from .beamform import ArchitectureConfig, RankDeficiencyError, build_beamformers
from .channel import ChannelMatrix, ClusterModel, ScenarioConfig, drop_channels
from .link import LinkBudget, noise_power, signal_interference
from .power import (ComponentCatalog, DevicePowerSpec, PowerBreakdown,
                    dbm_to_mw, rx_tx_crossover, transceiver_power)

ARCH_LABELS = ("abf", "hbf-cm", "hbf-zf", "dbf-cm", "dbf-zf")

# A run aborts once more than this fraction of its drops fail to build.
MAX_FAILED_DROP_FRACTION = 0.10


def architecture_from_label(label: str, streams_per_user: int = 1,
                            phase_bits: int = 0, n_users: int = 1) -> ArchitectureConfig:
    """Map a curve label like ``dbf-zf`` onto an ArchitectureConfig.

    Hybrid chain counts follow the frontier sizing rule: streams * users at
    the transmitter, streams at each terminal.
    """
    label = label.lower()
    if label == "abf":
        return ArchitectureConfig("abf", "steering", streams_per_user,
                                  phase_bits=phase_bits)
    try:
        kind, strategy = label.split("-")
    except ValueError:
        kind, strategy = label, ""
    if kind not in ("hbf", "dbf") or strategy not in ("cm", "zf"):
        raise ValueError(f"unknown architecture label {label!r}")
    cfg = ArchitectureConfig(kind, strategy, streams_per_user, phase_bits=phase_bits)
    if kind == "hbf":
        cfg.bs_rf_chains = streams_per_user * n_users
        cfg.ue_rf_chains = streams_per_user
    return cfg


@dataclass
class ExperimentConfig:
    """Everything a frontier run needs, with figure-style defaults."""

    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    cluster: ClusterModel = field(default_factory=ClusterModel)
    budget: LinkBudget = field(default_factory=LinkBudget)
    catalog: ComponentCatalog = field(default_factory=ComponentCatalog)
    bs_antennas: int = 64
    ue_antennas: int = 64
    spacing_wavelengths: float = 0.5
    architectures: tuple[str, ...] = ARCH_LABELS
    streams_per_user: int = 1
    phase_bits: int = 0
    n_drops: int = 50
    master_seed: int = 0
    sweep_dbm: tuple[float, ...] = tuple(float(p) for p in range(-10, 32, 2))
    mt_radiated_dbm: float = 18.0   # used by the MT TX side of power sweeps

    def __post_init__(self):
        if self.bs_antennas < 1 or self.ue_antennas < 1:
            raise ValueError("antenna counts must be >= 1")
        if self.n_drops < 1:
            raise ValueError("n_drops must be >= 1")
        if len(self.sweep_dbm) == 0:
            raise ValueError("power sweep must be nonempty")
        if any(b >= a for a, b in zip(self.sweep_dbm[1:], self.sweep_dbm)):
            raise ValueError("power sweep must be strictly ascending")
        for label in self.architectures:
            architecture_from_label(label)  # validates

    def bs_array(self) -> ArrayGeometry:
        return ArrayGeometry.square_for(self.bs_antennas,
                                        self.scenario.carrier_frequency_hz,
                                        self.spacing_wavelengths)

    def ue_array(self) -> ArrayGeometry:
        return ArrayGeometry.square_for(self.ue_antennas,
                                        self.scenario.carrier_frequency_hz,
                                        self.spacing_wavelengths)

    def drop_seed(self, drop_index: int) -> np.random.SeedSequence:
        """Substream for one drop: independent of every other drop."""
        return np.random.SeedSequence(entropy=(self.master_seed, drop_index))


@dataclass
class FrontierPoint:
    radiated_dbm: float
    mean_throughput_bps: float
    consumed_w: float
    ee_bits_per_joule: float
    n_drops_ok: int


@dataclass
class FrontierResult:
    """Per-architecture frontier curves plus drop bookkeeping."""

    points: dict[str, list[FrontierPoint]]
    failed_drops: dict[str, int]
    n_drops: int


def energy_efficiency(throughput_bps: float, consumed_w: float) -> float:
    """Bits per joule."""
    if consumed_w <= 0:
        raise ValueError("consumed power must be positive")
    if throughput_bps < 0:
        raise ValueError("throughput cannot be negative")
    return throughput_bps / consumed_w


def consumed_power_w(cfg: ExperimentConfig, label: str, radiated_dbm: float) -> float:
    """Downlink consumption: BS transmit side + every terminal's receive side."""
    arch = architecture_from_label(label, cfg.streams_per_user,
                                   cfg.phase_bits, cfg.scenario.n_users)
    kind = {"abf": "analog", "hbf": "hybrid", "dbf": "digital"}[arch.kind]
    bs_spec = DevicePowerSpec(
        device="bs", kind=kind, n_antennas=cfg.bs_antennas,
        radiated_dbm=radiated_dbm,
        n_rf=arch.bs_chains(cfg.bs_antennas, cfg.scenario.n_users)
        if kind == "hybrid" else None,
    )
    mt_spec = DevicePowerSpec(
        device="mt", kind=kind, n_antennas=cfg.ue_antennas,
        radiated_dbm=cfg.mt_radiated_dbm,
        n_rf=arch.ue_chains(cfg.ue_antennas) if kind == "hybrid" else None,
    )
    bs = transceiver_power(bs_spec, cfg.catalog)
    mt = transceiver_power(mt_spec, cfg.catalog)
    return (bs.tx_total_mw + cfg.scenario.n_users * mt.rx_total_mw) / 1000.0


def _drop_terms(cfg: ExperimentConfig, drop_index: int,
                bs: ArrayGeometry, ue: ArrayGeometry
                ) -> dict[str, tuple[np.ndarray, np.ndarray] | None]:
    """Signal/interference terms of one drop at 1 W, per architecture.

    Equal-power allocation scales every precoder column by sqrt(P), so at
    radiated power P the per-stream terms are exactly (P*sig, P*intf) -- the
    sweep never has to rebuild the beamformers.  ``None`` marks a failed
    beamformer construction (rank-deficient zero forcing).
    """
    channels = drop_channels(bs, ue, cfg.scenario, cfg.cluster,
                             cfg.drop_seed(drop_index))
    out: dict[str, tuple[np.ndarray, np.ndarray] | None] = {}
    for label in cfg.architectures:
        arch = architecture_from_label(label, cfg.streams_per_user,
                                       cfg.phase_bits, cfg.scenario.n_users)
        try:
            bf = build_beamformers(channels, arch, p_total_w=1.0)
            out[label] = signal_interference(channels, bf)
        except RankDeficiencyError:
            out[label] = None
    return out


def run_frontier(cfg: ExperimentConfig, threads: int = 1) -> FrontierResult:
    """Throughput / consumed-power / energy-efficiency frontier.

    For every architecture and sweep power, the mean sum throughput over the
    surviving drops is paired with the architecture's consumed power at that
    radiated level.  Raises RuntimeError when any architecture loses more
    than 10% of its drops.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    bs, ue = cfg.bs_array(), cfg.ue_array()
    noise_w = noise_power(cfg.budget)

    # Slot per drop, filled in any order, reduced in index order.
    per_drop: list[dict | None] = [None] * cfg.n_drops
    if threads == 1:
        for d in range(cfg.n_drops):
            per_drop[d] = _drop_terms(cfg, d, bs, ue)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_drop_terms, cfg, d, bs, ue): d
                       for d in range(cfg.n_drops)}
            for fut, d in futures.items():
                per_drop[d] = fut.result()

    points: dict[str, list[FrontierPoint]] = {}
    failed: dict[str, int] = {}
    for label in cfg.architectures:
        terms = [per_drop[d][label] for d in range(cfg.n_drops)]
        n_failed = sum(t is None for t in terms)
        failed[label] = n_failed
        if n_failed > MAX_FAILED_DROP_FRACTION * cfg.n_drops:
            raise RuntimeError(
                f"architecture {label}: {n_failed}/{cfg.n_drops} drops failed "
                f"beamformer construction (>10% tolerated)"
            )
        ok = [t for t in terms if t is not None]
        curve = []
        for p_dbm in cfg.sweep_dbm:
            p_w = dbm_to_mw(p_dbm) / 1000.0
            total = 0.0
            for sig, intf in ok:  # fixed order: drop index ascending
                sinr = (p_w * sig) / (p_w * intf + noise_w)
                total += float(np.sum(cfg.budget.bandwidth_hz * np.log2(1.0 + sinr)))
            mean_tput = total / len(ok)
            consumed = consumed_power_w(cfg, label, p_dbm)
            curve.append(FrontierPoint(
                radiated_dbm=p_dbm,
                mean_throughput_bps=mean_tput,
                consumed_w=consumed,
                ee_bits_per_joule=energy_efficiency(mean_tput, consumed),
                n_drops_ok=len(ok),
            ))
        points[label] = curve
    return FrontierResult(points, failed, cfg.n_drops)


@dataclass
class PowerSweepConfig:
    """Antenna sweep of the consumption model (no channel involved)."""

    catalog: ComponentCatalog = field(default_factory=ComponentCatalog)
    antennas: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)
    kinds: tuple[str, ...] = ("analog", "hybrid", "digital")
    devices: tuple[str, ...] = ("bs", "mt")
    hybrid_n_rf: int = 3
    bs_radiated_dbm: float = 30.0
    mt_radiated_dbm: float = 18.0

    def __post_init__(self):
        if not self.antennas or any(n < 1 for n in self.antennas):
            raise ValueError("antenna list must be nonempty positive integers")
        if self.hybrid_n_rf < 1:
            raise ValueError("hybrid_n_rf must be >= 1")

    def radiated(self, device: str) -> float:
        return self.bs_radiated_dbm if device == "bs" else self.mt_radiated_dbm


@dataclass
class PowerSweepResult:
    breakdowns: list[PowerBreakdown]
    crossovers: dict[tuple[str, str], int | None]   # (kind, device) -> N


def run_power_sweep(cfg: PowerSweepConfig) -> PowerSweepResult:
    """Consumption breakdowns over the antenna grid plus RX>TX crossovers.

    Hybrid rows are only emitted for antenna counts above the chain count
    (smaller front-ends have no hybrid reading).
    """
    rows = []
    for kind in cfg.kinds:
        for device in cfg.devices:
            for n in cfg.antennas:
                if kind == "hybrid" and n <= cfg.hybrid_n_rf:
                    continue
                spec = DevicePowerSpec(
                    device=device, kind=kind, n_antennas=n,
                    radiated_dbm=cfg.radiated(device),
                    n_rf=cfg.hybrid_n_rf if kind == "hybrid" else None,
                )
                rows.append(transceiver_power(spec, cfg.catalog))
    crossovers = {
        (kind, device): rx_tx_crossover(
            kind, device, cfg.radiated(device), cfg.catalog,
            n_rf=cfg.hybrid_n_rf if kind == "hybrid" else None)
        for kind in cfg.kinds for device in cfg.devices
    }
    return PowerSweepResult(rows, crossovers)
