"""Uniform planar array geometry and steering vectors.

Convention: the array lies in the x-z plane and its boresight points along
+y.  A direction is (azimuth, elevation) in radians, and the unit propagation
vector is

    u = (cos(el)*sin(az), cos(el)*cos(az), sin(el))

so (0, 0) is boresight.  Steering entries are exp(j * 2*pi/lambda * <u, p_i>)
with p_i the element position; entries have unit modulus, no normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 3.0e8  # m/s


@dataclass(frozen=True)
class Direction:
    """Propagation direction in the local array frame, angles in radians."""

    azimuth: float
    elevation: float

    def __post_init__(self):
        if not (-math.pi <= self.azimuth <= math.pi):
            raise ValueError(f"azimuth {self.azimuth} outside [-pi, pi]")
        if not (-math.pi / 2 <= self.elevation <= math.pi / 2):
            raise ValueError(f"elevation {self.elevation} outside [-pi/2, pi/2]")

    def unit_vector(self) -> np.ndarray:
        ce = math.cos(self.elevation)
        return np.array(
            [
                ce * math.sin(self.azimuth),
                ce * math.cos(self.azimuth),
                math.sin(self.elevation),
            ]
        )


@dataclass(frozen=True)
class ArrayGeometry:
    """Planar array: ``n_horizontal x n_vertical`` grid in the x-z plane.

    Element (ih, iv) sits at (ih * spacing, 0, iv * spacing); index order is
    vertical-major, so element i = iv * n_horizontal + ih.
    """

    n_horizontal: int
    n_vertical: int
    wavelength: float  # m
    spacing_wavelengths: float = 0.5
    positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_horizontal < 1 or self.n_vertical < 1:
            raise ValueError("array needs at least one element per axis")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if self.spacing_wavelengths <= 0:
            raise ValueError("element spacing must be positive")
        s = self.spacing_wavelengths * self.wavelength
        ih, iv = np.meshgrid(np.arange(self.n_horizontal), np.arange(self.n_vertical))
        pos = np.zeros((self.n_elements, 3))
        pos[:, 0] = ih.ravel() * s
        pos[:, 2] = iv.ravel() * s
        object.__setattr__(self, "positions", pos)

    @property
    def n_elements(self) -> int:
        return self.n_horizontal * self.n_vertical

    @classmethod
    def square_for(cls, n_elements: int, carrier_frequency_hz: float,
                   spacing_wavelengths: float = 0.5) -> "ArrayGeometry":
        """Most-square grid holding exactly ``n_elements`` antennas.

        Picks the largest divisor pair (n_h, n_v) with n_v <= n_h, e.g.
        64 -> 8x8, 256 -> 16x16, 32 -> 8x4, 10 -> 5x2.
        """
        if n_elements < 1:
            raise ValueError("n_elements must be >= 1")
        n_v = int(math.isqrt(n_elements))
        while n_elements % n_v:
            n_v -= 1
        lam = SPEED_OF_LIGHT / carrier_frequency_hz
        return cls(n_elements // n_v, n_v, lam, spacing_wavelengths)


def upa_steering(geometry: ArrayGeometry, direction: Direction) -> np.ndarray:
    """Array response vector of ``geometry`` toward ``direction``.

    Entry i is exp(j * (2*pi/lambda) * <u, p_i>); every entry has unit
    modulus and the squared 2-norm equals the element count.
    """
    k = 2.0 * math.pi / geometry.wavelength
    phase = k * (geometry.positions @ direction.unit_vector())
    return np.exp(1j * phase)


def beam_gain(weights: np.ndarray, steering: np.ndarray) -> float:
    """Power gain |<w, a>|^2 / ||w||^2 of weight vector ``w`` toward ``a``.

    Bounded by ||a||^2 (= N for unit-modulus steering entries) via
    Cauchy-Schwarz, with equality for the matched filter w = a.
    """
    w = np.asarray(weights, dtype=complex).ravel()
    a = np.asarray(steering, dtype=complex).ravel()
    if w.shape != a.shape:
        raise ValueError(f"weight/steering length mismatch: {w.size} vs {a.size}")
    norm_sq = float(np.real(np.vdot(w, w)))
    if norm_sq == 0.0:
        raise ValueError("weight vector has zero norm")
    return float(abs(np.vdot(w, a)) ** 2 / norm_sq)
