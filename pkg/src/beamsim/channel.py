"""Scenario geometry, user drops, and clustered LoS channel synthesis.

Two deployment scenarios are built in:

* ``fwa``  -- rooftop receivers spread over a sector in front of an elevated
  base station.
* ``v2i``  -- vehicles on two perpendicular road segments crossing near the
  base station foot.

The base station sits at the origin with its panel in the x-z plane facing
+y; user terminal panels face back along the line of sight, so the LoS
arrival is terminal boresight by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import SPEED_OF_LIGHT, ArrayGeometry, Direction, upa_steering

SCENARIO_KINDS = ("fwa", "v2i")


@dataclass
class ScenarioConfig:
    """Deployment geometry for a user drop."""

    kind: str = "fwa"
    n_users: int = 10
    bs_height_m: float = 30.0
    carrier_frequency_hz: float = 28.0e9
    # fwa sector
    sector_halfwidth_deg: float = 60.0
    min_distance_m: float = 10.0       # ground distance
    max_distance_m: float = 300.0
    user_height_min_m: float = 10.0
    user_height_max_m: float = 20.0
    # v2i roads
    road_length_m: float = 400.0
    crossroad_offset_m: float = 20.0   # crossroad distance from the BS foot
    min_ground_distance_m: float = 10.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.n_users < 1:
            raise ValueError("n_users must be >= 1")
        if self.carrier_frequency_hz <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.bs_height_m <= 0:
            raise ValueError("BS height must be positive")
        if not (0 < self.min_distance_m < self.max_distance_m):
            raise ValueError("need 0 < min_distance_m < max_distance_m")
        if self.user_height_min_m > self.user_height_max_m:
            raise ValueError("user height range is inverted")

    @classmethod
    def v2i_default(cls, n_users: int = 32) -> "ScenarioConfig":
        """Street-level vehicles under a 15 m pole-mounted panel."""
        return cls(
            kind="v2i",
            n_users=n_users,
            bs_height_m=15.0,
            user_height_min_m=1.65,
            user_height_max_m=1.65,
        )

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz


@dataclass
class ClusterModel:
    """Small-scale multipath on top of the LoS ray."""

    n_clusters: int = 3                   # single-ray scattering clusters
    cluster_power_offset_db: float = 10.0  # each cluster this far below LoS
    angle_spread_deg: float = 10.0         # std dev of Laplacian perturbation
    pathloss_exponent: float = 2.0         # 2.0 = free space

    def __post_init__(self):
        if self.n_clusters < 0:
            raise ValueError("n_clusters must be >= 0")
        if self.cluster_power_offset_db < 0:
            raise ValueError("cluster power offset must be >= 0 dB")
        if self.angle_spread_deg < 0:
            raise ValueError("angle spread must be >= 0")
        if self.pathloss_exponent <= 0:
            raise ValueError("pathloss exponent must be positive")


@dataclass
class PathSet:
    """Rays of one link: complex gains plus departure/arrival directions.

    Index 0 is the LoS ray; any further entries are cluster rays.
    """

    gains: np.ndarray                 # complex amplitude per ray
    departures: list[Direction]       # BS frame
    arrivals: list[Direction]         # terminal frame

    def __post_init__(self):
        self.gains = np.asarray(self.gains, dtype=complex)
        n = len(self.gains)
        if n == 0 or len(self.departures) != n or len(self.arrivals) != n:
            raise ValueError("gains/departures/arrivals lengths disagree")

    @property
    def n_paths(self) -> int:
        return len(self.gains)


@dataclass
class ChannelMatrix:
    """One user's MIMO channel with the geometry that generated it."""

    user_id: int
    matrix: np.ndarray        # n_rx x n_tx
    paths: PathSet
    distance_m: float
    pathloss_db: float


def free_space_path_loss(distance_m: float, frequency_hz: float) -> float:
    """Free-space path loss 20*log10(4*pi*d/lambda) in dB."""
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    if frequency_hz <= 0:
        raise ValueError("frequency must be positive")
    lam = SPEED_OF_LIGHT / frequency_hz
    return 20.0 * math.log10(4.0 * math.pi * distance_m / lam)


def path_loss_db(distance_m: float, frequency_hz: float, exponent: float = 2.0) -> float:
    """Path loss with a configurable distance exponent (2.0 = free space).

    Uses the 1 m free-space intercept, so exponent 2.0 reproduces
    :func:`free_space_path_loss` exactly.
    """
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    lam = SPEED_OF_LIGHT / frequency_hz
    intercept = 20.0 * math.log10(4.0 * math.pi / lam)
    return intercept + 10.0 * exponent * math.log10(distance_m)


def _rng_of(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def drop_users(cfg: ScenarioConfig, seed) -> np.ndarray:
    """Sample user positions for one drop.

    Returns an (n_users, 3) array of x/y/z coordinates in meters, BS foot at
    the origin.  ``fwa`` users are uniform in azimuth over the sector, in
    ground distance over [min, max] and in height over the configured range;
    ``v2i`` users are uniform along two perpendicular road segments through
    the crossroad, rejecting positions closer than the ground-distance floor
    to the BS foot.
    """
    rng = _rng_of(seed)
    out = np.zeros((cfg.n_users, 3))
    if cfg.kind == "fwa":
        half = math.radians(cfg.sector_halfwidth_deg)
        az = rng.uniform(-half, half, cfg.n_users)
        dist = rng.uniform(cfg.min_distance_m, cfg.max_distance_m, cfg.n_users)
        out[:, 0] = dist * np.sin(az)
        out[:, 1] = dist * np.cos(az)
        out[:, 2] = rng.uniform(cfg.user_height_min_m, cfg.user_height_max_m, cfg.n_users)
    else:  # v2i
        half = cfg.road_length_m / 2.0
        for i in range(cfg.n_users):
            while True:
                t = rng.uniform(-half, half)
                if rng.random() < 0.5:
                    x, y = t, cfg.crossroad_offset_m      # road parallel to the panel
                else:
                    x, y = 0.0, cfg.crossroad_offset_m + t  # road along boresight
                if math.hypot(x, y) >= cfg.min_ground_distance_m:
                    break
            out[i] = (x, y, rng.uniform(cfg.user_height_min_m, cfg.user_height_max_m))
    return out


def _wrap_azimuth(az: float) -> float:
    return math.atan2(math.sin(az), math.cos(az))


def _clip_elevation(el: float) -> float:
    return min(max(el, -math.pi / 2), math.pi / 2)


def los_departure(cfg: ScenarioConfig, position: np.ndarray) -> tuple[Direction, float]:
    """LoS departure direction in the BS frame and the 3-D link distance."""
    dx, dy = float(position[0]), float(position[1])
    dz = float(position[2]) - cfg.bs_height_m
    ground = math.hypot(dx, dy)
    dist = math.hypot(ground, dz)
    if dist <= 0:
        raise ValueError("user is colocated with the BS antenna")
    az = math.atan2(dx, dy)  # boresight +y
    el = math.atan2(dz, ground)
    return Direction(az, el), dist


def make_paths(cfg: ScenarioConfig, model: ClusterModel, position: np.ndarray,
               rng: np.random.Generator) -> tuple[PathSet, float, float]:
    """Draw the ray set for one link: LoS plus single-ray clusters.

    The LoS amplitude is 10^(-PL/20) with the deterministic distance phase
    exp(-j*2*pi*d/lambda).  Each cluster gain is complex Gaussian with RMS
    amplitude 10^(-(PL + offset)/20), i.e. its mean power sits
    ``cluster_power_offset_db`` below the LoS power.  Cluster departure and
    arrival angles are the LoS angles perturbed by independent Laplacian
    offsets with the configured standard deviation.
    """
    dep_los, dist = los_departure(cfg, position)
    pl_db = path_loss_db(dist, cfg.carrier_frequency_hz, model.pathloss_exponent)
    amp_los = 10.0 ** (-pl_db / 20.0)
    phase_los = -2.0 * math.pi * dist / cfg.wavelength
    gains = [amp_los * np.exp(1j * phase_los)]
    departures = [dep_los]
    arrivals = [Direction(0.0, 0.0)]  # terminal boresight tracks the LoS ray

    if model.n_clusters > 0:
        rms = 10.0 ** (-(pl_db + model.cluster_power_offset_db) / 20.0)
        scale = math.radians(model.angle_spread_deg) / math.sqrt(2.0)  # Laplace b
        for _ in range(model.n_clusters):
            g = rms * (rng.standard_normal() + 1j * rng.standard_normal()) / math.sqrt(2.0)
            d_az, d_el, a_az, a_el = rng.laplace(0.0, scale, 4) if scale > 0 else (0.0,) * 4
            gains.append(g)
            departures.append(
                Direction(_wrap_azimuth(dep_los.azimuth + d_az),
                          _clip_elevation(dep_los.elevation + d_el))
            )
            arrivals.append(
                Direction(_wrap_azimuth(a_az), _clip_elevation(a_el))
            )
    return PathSet(np.array(gains), departures, arrivals), dist, pl_db


def synthesize_channel(bs: ArrayGeometry, terminal: ArrayGeometry,
                       cfg: ScenarioConfig, model: ClusterModel,
                       position: np.ndarray, rng: np.random.Generator,
                       user_id: int = 0) -> ChannelMatrix:
    """Build one user's channel matrix H = sum_p g_p * a_rx(p) a_tx(p)^H.

    With unit-modulus steering entries this gives
    E[||H||_F^2] = n_tx * n_rx * sum_p E|g_p|^2 (cross terms average out),
    so the Frobenius energy tracks the total path power by construction.
    """
    paths, dist, pl_db = make_paths(cfg, model, position, rng)
    h = np.zeros((terminal.n_elements, bs.n_elements), dtype=complex)
    for g, dep, arr in zip(paths.gains, paths.departures, paths.arrivals):
        a_tx = upa_steering(bs, dep)
        a_rx = upa_steering(terminal, arr)
        h += g * np.outer(a_rx, a_tx.conj())
    return ChannelMatrix(user_id, h, paths, dist, pl_db)


def drop_channels(bs: ArrayGeometry, terminal: ArrayGeometry,
                  cfg: ScenarioConfig, model: ClusterModel,
                  seed) -> list[ChannelMatrix]:
    """One full drop: sample positions, then a channel per user.

    A single generator drives positions and all per-user channels in user
    order, so the whole drop is a deterministic function of the seed.
    """
    rng = _rng_of(seed)
    positions = drop_users(cfg, rng)
    return [
        synthesize_channel(bs, terminal, cfg, model, positions[k], rng, user_id=k)
        for k in range(cfg.n_users)
    ]
