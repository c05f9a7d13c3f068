"""Link budget, per-stream SINR, and Shannon throughput."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamform import BeamformerSet
from .channel import ChannelMatrix


@dataclass
class LinkBudget:
    bandwidth_hz: float = 200.0e6
    noise_psd_dbm_hz: float = -174.0   # thermal floor at 290 K
    noise_figure_db: float = 5.0       # receiver front-end

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")
        if self.noise_figure_db < 0:
            raise ValueError("noise figure must be >= 0 dB")


@dataclass
class RateReport:
    """Throughput of one drop under one beamformer set."""

    stream_sinr: np.ndarray        # linear, user-major stream order
    stream_rate_bps: np.ndarray
    per_user_rate_bps: np.ndarray
    sum_rate_bps: float


def noise_power(budget: LinkBudget) -> float:
    """Receiver noise power in watts: PSD + 10*log10(BW) + NF, then dBm->W."""
    dbm = (budget.noise_psd_dbm_hz
           + 10.0 * math.log10(budget.bandwidth_hz)
           + budget.noise_figure_db)
    return 10.0 ** ((dbm - 30.0) / 10.0)


def signal_interference(channels: list[ChannelMatrix],
                        beamformers: BeamformerSet) -> tuple[np.ndarray, np.ndarray]:
    """Per-stream desired power and aggregate interference power (watts).

    For stream (k, s) the desired term is |w_{k,s}^H H_k f_{k,s}|^2 and the
    interference term sums |w_{k,s}^H H_k f_{j,t}|^2 over every other stream
    (j, t), including the user's own remaining streams.
    """
    f = beamformers.bs_precoder
    s_per = beamformers.arch.streams_per_user
    n_streams = beamformers.total_streams
    if n_streams != len(channels) * s_per:
        raise ValueError("beamformer stream count does not match the drop")
    signal = np.zeros(n_streams)
    interference = np.zeros(n_streams)
    for k, (ch, w) in enumerate(zip(channels, beamformers.ue_combiners)):
        m = w.conj().T @ ch.matrix @ f          # s_per x n_streams
        power = np.abs(m) ** 2
        for s in range(s_per):
            idx = k * s_per + s
            signal[idx] = power[s, idx]
            interference[idx] = float(np.sum(power[s])) - power[s, idx]
    return signal, interference


def stream_sinr(channels: list[ChannelMatrix], beamformers: BeamformerSet,
                noise_w: float) -> np.ndarray:
    """Linear SINR per stream in user-major order."""
    if noise_w <= 0:
        raise ValueError("noise power must be positive")
    signal, interference = signal_interference(channels, beamformers)
    return signal / (interference + noise_w)


def sum_throughput(sinr: np.ndarray, budget: LinkBudget,
                   streams_per_user: int = 1) -> RateReport:
    """Shannon rates BW * log2(1 + SINR) per stream, per user, and summed."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ValueError("SINR cannot be negative")
    rates = budget.bandwidth_hz * np.log2(1.0 + sinr)
    per_user = rates.reshape(-1, streams_per_user).sum(axis=1)
    return RateReport(sinr, rates, per_user, float(np.sum(rates)))
