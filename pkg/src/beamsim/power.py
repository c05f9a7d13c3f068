"""Transceiver power-consumption model for the three front-end architectures.

The component catalog carries published consumption figures for
state-of-the-art mmWave hardware.  Converters follow the classic
``P = P_ref * 2^(bits - bits_ref) * (f_s / f_ref)`` law, and fully digital /
hybrid chains shed resolution because combining N (or N_RF) chains averages
quantization noise down: the effective word length drops by about
``1.7 * log10(N)`` bits at equal signal quality.

Composition rules per architecture (TX | RX):

* analog:  1 DAC, 1 TX LPF, shared LO, N PAs, splitter/driver (N >= 2)
           | N LNAs (IL-compensating), 1 RX LPF, 1 VGA, 1 ADC, shared LO
* hybrid:  N_RF x (DAC, LPF), shared + per-chain LO, N PAs, driver
           | N LNAs (analog-grade), N_RF x (LPF, VGA, ADC), shared + per-chain LO
* digital: N x (DAC, LPF), shared + per-chain LO, N PAs
           | N x (LNA, LPF, VGA, ADC), shared + per-chain LO

The analog-architecture LNA is the expensive one: it absorbs the ~8 dB
insertion loss of the phase-shifter network, which a per-element digital
front-end does not pay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

ARCH_KINDS = ("analog", "hybrid", "digital")
DEVICES = ("bs", "mt")

# Bits of resolution shed per decade of combined chains at equal SQNR.
BITS_PER_DECADE = 1.7


@dataclass(frozen=True)
class ComponentCatalog:
    """Per-component consumption references, mW unless noted."""

    dac_ref_bs_mw: float = 43.0     # at bs_dac_bits, ref sample rate
    dac_ref_mt_mw: float = 3.0      # at mt_dac_bits
    adc_ref_bs_mw: float = 172.0    # at bs_adc_bits
    adc_ref_mt_mw: float = 11.0     # at mt_adc_bits
    bs_adc_bits: int = 12
    bs_dac_bits: int = 10
    mt_adc_bits: int = 8
    mt_dac_bits: int = 6
    lo_mw: float = 30.0             # shared local oscillator, per side
    per_chain_lo_mw: float = 15.0   # LO buffering/distribution per digital chain
    lpf_tx_mw: float = 0.5
    lpf_rx_mw: float = 1.6
    lna_analog_mw: float = 36.0     # compensates phase-shifter insertion loss
    lna_digital_mw: float = 5.6
    vga_mw: float = 1.3
    phase_shifter_il_db: float = 8.0
    tx_driver_mw: float = 75.0      # splitter/driver ahead of the PA bank
    pa_efficiency: float = 0.15
    ref_sample_rate_hz: float = 200.0e6

    def __post_init__(self):
        for name in ("dac_ref_bs_mw", "dac_ref_mt_mw", "adc_ref_bs_mw",
                     "adc_ref_mt_mw", "lo_mw", "lpf_tx_mw", "lpf_rx_mw",
                     "lna_analog_mw", "lna_digital_mw", "vga_mw",
                     "ref_sample_rate_hz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"catalog field {name} must be positive")
        for name in ("per_chain_lo_mw", "tx_driver_mw", "phase_shifter_il_db"):
            if getattr(self, name) < 0:
                raise ValueError(f"catalog field {name} must be >= 0")
        for name in ("bs_adc_bits", "bs_dac_bits", "mt_adc_bits", "mt_dac_bits"):
            if getattr(self, name) < 1:
                raise ValueError(f"catalog field {name} must be >= 1")
        if not 0 < self.pa_efficiency <= 1:
            raise ValueError("pa_efficiency must be in (0, 1]")

    def adc_ref(self, device: str) -> tuple[float, int]:
        return ((self.adc_ref_bs_mw, self.bs_adc_bits) if device == "bs"
                else (self.adc_ref_mt_mw, self.mt_adc_bits))

    def dac_ref(self, device: str) -> tuple[float, int]:
        return ((self.dac_ref_bs_mw, self.bs_dac_bits) if device == "bs"
                else (self.dac_ref_mt_mw, self.mt_dac_bits))


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def effective_bits(base_bits: int, kind: str, n_antennas: int,
                   n_rf: int | None = None) -> int:
    """Converter resolution after chain-combining gain, floored at 1 bit.

    Digital front-ends shed ``1.7 * log10(N)`` bits, hybrids
    ``1.7 * log10(N_RF)``; the analog single chain keeps the base resolution.
    Rounding is half-away-from-zero to the nearest integer bit.
    """
    if kind not in ARCH_KINDS:
        raise ValueError(f"unknown architecture kind {kind!r}")
    if base_bits < 1:
        raise ValueError("base_bits must be >= 1")
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    if kind == "analog":
        combined = 1
    elif kind == "digital":
        combined = n_antennas
    else:
        if n_rf is None or n_rf < 1:
            raise ValueError("hybrid needs n_rf >= 1")
        combined = n_rf
    bits = _round_half_away(base_bits - BITS_PER_DECADE * math.log10(combined))
    return max(1, bits)


def converter_power(ref_mw: float, ref_bits: int, bits: int,
                    sample_rate_hz: float, ref_rate_hz: float) -> float:
    """ADC/DAC consumption: exponential in bits, linear in sample rate."""
    if ref_mw <= 0 or sample_rate_hz <= 0 or ref_rate_hz <= 0:
        raise ValueError("reference power and rates must be positive")
    if ref_bits < 1 or bits < 1:
        raise ValueError("bit counts must be >= 1")
    return ref_mw * 2.0 ** (bits - ref_bits) * (sample_rate_hz / ref_rate_hz)


def pa_power(radiated_mw: float, efficiency: float) -> float:
    """Total PA consumption needed to radiate ``radiated_mw``."""
    if radiated_mw < 0:
        raise ValueError("radiated power cannot be negative")
    if not 0 < efficiency <= 1:
        raise ValueError("efficiency must be in (0, 1]")
    return radiated_mw / efficiency


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


@dataclass
class DevicePowerSpec:
    """One device-side configuration for the consumption model."""

    device: str                    # "bs" | "mt"
    kind: str                      # "analog" | "hybrid" | "digital"
    n_antennas: int
    radiated_dbm: float            # total radiated power (split across PAs)
    n_rf: int | None = None        # hybrid only; derived for analog/digital
    sample_rate_hz: float | None = None  # None: catalog reference rate

    def __post_init__(self):
        if self.device not in DEVICES:
            raise ValueError(f"unknown device {self.device!r}")
        if self.kind not in ARCH_KINDS:
            raise ValueError(f"unknown architecture kind {self.kind!r}")
        if self.n_antennas < 1:
            raise ValueError("n_antennas must be >= 1")
        if self.kind == "hybrid":
            if self.n_rf is None or not 1 <= self.n_rf < self.n_antennas:
                raise ValueError(
                    f"hybrid needs 1 <= n_rf < n_antennas, got n_rf={self.n_rf} "
                    f"with {self.n_antennas} antennas"
                )
        elif self.kind == "digital":
            if self.n_rf is not None and self.n_rf != self.n_antennas:
                raise ValueError("digital front-ends have n_rf == n_antennas")
            self.n_rf = self.n_antennas
        else:
            if self.n_rf is not None and self.n_rf != 1:
                raise ValueError("analog front-ends have a single RF chain")
            self.n_rf = 1

    @property
    def per_pa_radiated_mw(self) -> float:
        return dbm_to_mw(self.radiated_dbm) / self.n_antennas


@dataclass
class PowerBreakdown:
    """Itemized consumption of one device, mW, keyed by component."""

    spec: DevicePowerSpec
    tx_items: dict[str, float] = field(default_factory=dict)
    rx_items: dict[str, float] = field(default_factory=dict)

    @property
    def tx_total_mw(self) -> float:
        return float(sum(self.tx_items.values()))

    @property
    def rx_total_mw(self) -> float:
        return float(sum(self.rx_items.values()))

    @property
    def total_mw(self) -> float:
        return self.tx_total_mw + self.rx_total_mw


def transceiver_power(spec: DevicePowerSpec,
                      catalog: ComponentCatalog = ComponentCatalog()) -> PowerBreakdown:
    """Itemized TX and RX consumption for one device configuration."""
    n = spec.n_antennas
    rate = spec.sample_rate_hz or catalog.ref_sample_rate_hz
    adc_ref_mw, adc_bits = catalog.adc_ref(spec.device)
    dac_ref_mw, dac_bits = catalog.dac_ref(spec.device)
    eff_adc = effective_bits(adc_bits, spec.kind, n, spec.n_rf)
    eff_dac = effective_bits(dac_bits, spec.kind, n, spec.n_rf)
    adc_mw = converter_power(adc_ref_mw, adc_bits, eff_adc, rate,
                             catalog.ref_sample_rate_hz)
    dac_mw = converter_power(dac_ref_mw, dac_bits, eff_dac, rate,
                             catalog.ref_sample_rate_hz)
    n_chains = spec.n_rf
    pa_mw = pa_power(dbm_to_mw(spec.radiated_dbm), catalog.pa_efficiency)

    tx: dict[str, float] = {
        "dac": n_chains * dac_mw,
        "lpf_tx": n_chains * catalog.lpf_tx_mw,
        "lo_tx": catalog.lo_mw,
        "pa": pa_mw,
    }
    rx: dict[str, float] = {
        "lpf_rx": n_chains * catalog.lpf_rx_mw,
        "vga": n_chains * catalog.vga_mw,
        "adc": n_chains * adc_mw,
        "lo_rx": catalog.lo_mw,
    }
    if spec.kind == "digital":
        rx["lna"] = n * catalog.lna_digital_mw
        tx["lo_tx"] += n_chains * catalog.per_chain_lo_mw
        rx["lo_rx"] += n_chains * catalog.per_chain_lo_mw
    else:
        # Phase-shifter front-end: pricey LNAs soak up the insertion loss,
        # and (for N >= 2) a splitter/driver stage feeds the PA bank.
        rx["lna"] = n * catalog.lna_analog_mw
        if n >= 2:
            tx["driver"] = catalog.tx_driver_mw
        if spec.kind == "hybrid":
            tx["lo_tx"] += n_chains * catalog.per_chain_lo_mw
            rx["lo_rx"] += n_chains * catalog.per_chain_lo_mw
    return PowerBreakdown(spec, tx, rx)


def rx_tx_crossover(kind: str, device: str, radiated_dbm: float,
                    catalog: ComponentCatalog = ComponentCatalog(),
                    n_rf: int | None = None,
                    n_max: int = 1024) -> int | None:
    """Smallest antenna count where receiving costs more than transmitting.

    Scans N = 1..n_max (hybrids start above their chain count) and returns
    the first N with rx_total > tx_total, or None if the RX side never
    catches up.  TX totals include the PA bank, so the crossover moves out
    with radiated power.
    """
    n_start = 1 if kind != "hybrid" else (n_rf or 1) + 1
    for n in range(n_start, n_max + 1):
        spec = DevicePowerSpec(device=device, kind=kind, n_antennas=n,
                               radiated_dbm=radiated_dbm,
                               n_rf=n_rf if kind == "hybrid" else None)
        b = transceiver_power(spec, catalog)
        if b.rx_total_mw > b.tx_total_mw:
            return n
    return None
