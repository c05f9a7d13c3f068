"""Transmit precoding and receive combining for the three front-ends.

Architectures:

* ``dbf``  -- fully digital: one RF chain per element, unconstrained weights.
* ``hbf``  -- hybrid: a unit-modulus phase-shifter stage into a small digital
  baseband stage (RF chains << elements).
* ``abf``  -- analog: phase-only steering, one column per served stream,
  superposed with no digital interference suppression.

Strategies: ``cm`` (channel matched), ``zf`` (zero forcing via the
pseudo-inverse), ``steering`` (phase-only CM, forced for ``abf``).

Streams are ordered user-major: stream (k, s) has flat index
k * streams_per_user + s, and every matrix in this module follows it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .channel import ChannelMatrix

ARCH_KINDS = ("abf", "hbf", "dbf")
STRATEGIES = ("steering", "cm", "zf")

# Precoder columns whose squared norm falls below this fraction of P_T/S are
# treated as degenerate (a dead stream) rather than silently renormalized.
_ZERO_COL_REL = 1e-30


class RankDeficiencyError(RuntimeError):
    """Zero-forcing was asked to invert a row-rank-deficient effective channel."""

    def __init__(self, message: str, rows: list[int]):
        super().__init__(message)
        self.rows = rows


@dataclass
class ArchitectureConfig:
    """Front-end kind, precoding strategy, and chain counts for one device pair."""

    kind: str = "dbf"
    strategy: str = "zf"
    streams_per_user: int = 1
    bs_rf_chains: int | None = None   # None: derived (dbf -> n_tx, abf -> 1)
    ue_rf_chains: int | None = None
    phase_bits: int = 0               # 0 = unquantized phase shifters

    def __post_init__(self):
        if self.kind not in ARCH_KINDS:
            raise ValueError(f"unknown architecture kind {self.kind!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.kind == "abf" and self.strategy != "steering":
            raise ValueError("abf only supports the steering strategy")
        if self.kind != "abf" and self.strategy == "steering":
            raise ValueError(f"{self.kind} requires cm or zf, not steering")
        if self.streams_per_user not in (1, 2):
            raise ValueError("streams_per_user must be 1 or 2")
        if self.phase_bits < 0:
            raise ValueError("phase_bits must be >= 0")

    @property
    def label(self) -> str:
        if self.kind == "abf":
            return "ABF"
        return f"{self.kind.upper()}-{self.strategy.upper()}"

    def bs_chains(self, n_tx: int, n_users: int) -> int:
        """RF chain count at the transmitter (frontier sizing for hbf)."""
        if self.kind == "dbf":
            return n_tx
        if self.kind == "abf":
            return 1
        n = self.bs_rf_chains if self.bs_rf_chains is not None \
            else self.streams_per_user * n_users
        if not 1 <= n < n_tx:
            raise ValueError(f"hybrid BS needs 1 <= rf_chains < {n_tx}, got {n}")
        return n

    def ue_chains(self, n_rx: int) -> int:
        """RF chain count at one terminal."""
        if self.kind == "dbf":
            return n_rx
        if self.kind == "abf":
            return 1
        n = self.ue_rf_chains if self.ue_rf_chains is not None else self.streams_per_user
        if not 1 <= n < n_rx:
            raise ValueError(f"hybrid terminal needs 1 <= rf_chains < {n_rx}, got {n}")
        return n


@dataclass
class BeamformerSet:
    """Everything needed to evaluate one drop under one architecture."""

    arch: ArchitectureConfig
    ue_combiners: list[np.ndarray]      # per user, n_rx x streams, unit-norm cols
    bs_rf_stage: np.ndarray | None      # n_tx x n_rf, unit-modulus; None = identity (dbf)
    bs_baseband: np.ndarray             # n_rf x total_streams
    p_total_w: float

    @property
    def n_users(self) -> int:
        return len(self.ue_combiners)

    @property
    def total_streams(self) -> int:
        return self.bs_baseband.shape[1]

    @property
    def bs_precoder(self) -> np.ndarray:
        """Composite n_tx x total_streams precoder (RF stage folded in)."""
        if self.bs_rf_stage is None:
            return self.bs_baseband
        return self.bs_rf_stage @ self.bs_baseband


def quantize_phases(m: np.ndarray, phase_bits: int) -> np.ndarray:
    """Snap entry phases to a 2^bits uniform grid, preserving magnitudes.

    ``phase_bits == 0`` means ideal (continuous) phase shifters and returns
    the input unchanged.
    """
    if phase_bits == 0:
        return m
    step = 2.0 * np.pi / (2 ** phase_bits)
    snapped = np.round(np.angle(m) / step) * step
    return np.abs(m) * np.exp(1j * snapped)


def _phase_only(m: np.ndarray, phase_bits: int, scale: float) -> np.ndarray:
    """Unit-modulus copy of ``m`` scaled by ``scale``, optionally quantized."""
    out = np.exp(1j * np.angle(m))
    out = quantize_phases(out, phase_bits)
    return scale * out


def rx_combiners(channels: list[ChannelMatrix], arch: ArchitectureConfig) -> list[np.ndarray]:
    """Per-user receive combiners, one unit-norm column per stream.

    Digital terminals use the dominant left singular vectors of their own
    channel; analog/hybrid terminals keep only the phases of those vectors
    (entries exp(j*phi)/sqrt(n_rx)), quantized when phase_bits > 0.
    """
    s_per = arch.streams_per_user
    out = []
    for ch in channels:
        n_rx, n_tx = ch.matrix.shape
        if s_per > min(n_rx, n_tx):
            raise ValueError(
                f"user {ch.user_id}: {s_per} streams exceed min({n_rx}, {n_tx})"
            )
        u, _, _ = linalg.svd(ch.matrix)
        w = u[:, :s_per]
        if arch.kind in ("abf", "hbf"):
            w = _phase_only(w, arch.phase_bits, 1.0 / np.sqrt(n_rx))
        out.append(w)
    return out


def effective_channels(channels: list[ChannelMatrix],
                       combiners: list[np.ndarray]) -> np.ndarray:
    """Stack w_{k,s}^H H_k into the total_streams x n_tx effective channel."""
    if len(channels) != len(combiners):
        raise ValueError("one combiner block per channel required")
    rows = [w.conj().T @ ch.matrix for ch, w in zip(channels, combiners)]
    return np.vstack(rows)


def _unit_columns(f: np.ndarray, context: str) -> np.ndarray:
    norms = np.linalg.norm(f, axis=0)
    dead = np.flatnonzero(norms == 0.0)
    if dead.size:
        raise ValueError(f"{context}: zero-norm column(s) for stream(s) {dead.tolist()}")
    return f / norms


def precoder_cm(g_eff: np.ndarray) -> np.ndarray:
    """Channel-matched precoder: G^H with every column scaled to unit norm."""
    g = linalg.as_matrix(g_eff)
    zero_rows = np.flatnonzero(np.linalg.norm(g, axis=1) == 0.0)
    if zero_rows.size:
        raise ValueError(
            f"channel-matched precoder: effective channel row(s) "
            f"{zero_rows.tolist()} are zero"
        )
    return _unit_columns(g.conj().T, "channel-matched precoder")


def _offending_rows(g: np.ndarray) -> list[int]:
    """Best-effort identification of rows that break full row rank."""
    norms = np.linalg.norm(g, axis=1)
    bad = set(np.flatnonzero(norms == 0.0).tolist())
    unit = g / np.where(norms[:, None] > 0, norms[:, None], 1.0)
    gram = np.abs(unit @ unit.conj().T)
    np.fill_diagonal(gram, 0.0)
    for i, j in zip(*np.nonzero(gram > 1.0 - 1e-8)):
        if i < j:
            bad.update((int(i), int(j)))
    return sorted(bad)


def precoder_zf(g_eff: np.ndarray) -> np.ndarray:
    """Zero-forcing precoder: unit-norm columns of pinv(G).

    Requires G to have full row rank so that G @ pinv(G) is the identity
    (diagonal after the per-column rescale); otherwise raises
    :class:`RankDeficiencyError` naming the offending rows.
    """
    g = linalg.as_matrix(g_eff)
    n_rows = g.shape[0]
    u, s, v = linalg.svd(g)
    rank = int(np.sum(s > linalg.rank_cutoff(s, g.shape)))
    if rank < n_rows:
        rows = _offending_rows(g) or list(range(n_rows))
        raise RankDeficiencyError(
            f"zero-forcing needs full row rank: rank {rank} < {n_rows} rows; "
            f"offending stream row(s): {rows}",
            rows,
        )
    inv = (v[:, :rank] / s[:rank]) @ u[:, :rank].conj().T
    return _unit_columns(inv, "zero-forcing precoder")


def hybrid_factorize(f_target: np.ndarray, g_eff: np.ndarray, n_rf: int,
                     strategy: str, phase_bits: int = 0
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Split a digital precoder into phase-only RF and digital baseband stages.

    Parameters
    ----------
    f_target : ndarray, n_tx x total_streams
        Full-digital precoder whose column phases seed the RF stage.
    g_eff : ndarray, total_streams x n_tx
        Effective channel the baseband stage is recomputed against.
    n_rf : int
        Available RF chains; must cover the stream count (extra chains idle).
    strategy : "cm" | "zf"
        Baseband strategy, recomputed on the reduced channel G @ F_RF.
    phase_bits : int
        Phase-shifter resolution (0 = ideal).

    Returns (f_rf, f_bb): f_rf has unit-modulus entries, one column per
    stream; f_bb is the n_rf_used x total_streams baseband stage.
    """
    f_t = linalg.as_matrix(f_target)
    n_streams = f_t.shape[1]
    if n_rf < n_streams:
        raise ValueError(f"{n_rf} RF chains cannot carry {n_streams} streams")
    if strategy not in ("cm", "zf"):
        raise ValueError(f"hybrid baseband strategy must be cm or zf, got {strategy!r}")
    f_rf = _phase_only(f_t, phase_bits, 1.0)
    reduced = linalg.as_matrix(g_eff) @ f_rf
    f_bb = precoder_cm(reduced) if strategy == "cm" else precoder_zf(reduced)
    return f_rf, f_bb


def allocate_power(precoder: np.ndarray, p_total_w: float) -> np.ndarray:
    """Equal per-stream power: scale each column to ||f_s||^2 = P_T / S.

    The returned matrix satisfies ||F||_F^2 = P_T to machine precision.
    """
    if p_total_w <= 0:
        raise ValueError("total transmit power must be positive")
    f = linalg.as_matrix(precoder)
    n_streams = f.shape[1]
    target = p_total_w / n_streams
    col_power = np.sum(np.abs(f) ** 2, axis=0)
    dead = np.flatnonzero(col_power <= _ZERO_COL_REL * target)
    if dead.size:
        raise ValueError(f"cannot power-scale zero column(s) {dead.tolist()}")
    return f * np.sqrt(target / col_power)


def build_beamformers(channels: list[ChannelMatrix], arch: ArchitectureConfig,
                      p_total_w: float) -> BeamformerSet:
    """Full pipeline for one drop: combiners -> effective channel -> precoder.

    The analog kind takes the phases of the channel-matched columns at both
    ends; the hybrid kind factorizes its strategy's digital precoder through
    the phase-shifter stage and recomputes the baseband on the reduced
    channel.  Power allocation is always equal per stream over the composite
    precoder.
    """
    combiners = rx_combiners(channels, arch)
    g_eff = effective_channels(channels, combiners)
    n_tx = g_eff.shape[1]
    n_users = len(channels)

    if arch.kind == "dbf":
        f = precoder_cm(g_eff) if arch.strategy == "cm" else precoder_zf(g_eff)
        rf, bb = None, allocate_power(f, p_total_w)
    elif arch.kind == "abf":
        # Phase-matched steering columns, superposed; no baseband suppression.
        rf = _phase_only(precoder_cm(g_eff), arch.phase_bits, 1.0)
        bb = np.eye(rf.shape[1], dtype=complex)
        bb = _rescale_product(rf, bb, p_total_w)
    else:
        n_rf = arch.bs_chains(n_tx, n_users)
        target = precoder_cm(g_eff) if arch.strategy == "cm" else precoder_zf(g_eff)
        rf, bb = hybrid_factorize(target, g_eff, n_rf, arch.strategy, arch.phase_bits)
        bb = _rescale_product(rf, bb, p_total_w)
    return BeamformerSet(arch, combiners, rf, bb, p_total_w)


def _rescale_product(rf: np.ndarray, bb: np.ndarray, p_total_w: float) -> np.ndarray:
    """Scale baseband columns so the composite rf @ bb carries P_T/S each."""
    prod = rf @ bb
    col_power = np.sum(np.abs(prod) ** 2, axis=0)
    target = p_total_w / prod.shape[1]
    dead = np.flatnonzero(col_power <= _ZERO_COL_REL * target)
    if dead.size:
        raise ValueError(f"cannot power-scale zero column(s) {dead.tolist()}")
    return bb * np.sqrt(target / col_power)
