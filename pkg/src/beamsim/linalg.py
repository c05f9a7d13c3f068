"""Thin complex linear-algebra layer used by the beamforming chain.

Everything here operates on 2-D complex ndarrays.  The heavy lifting is
delegated to LAPACK through numpy; this module pins down the conventions
(hermitian transpose, economy SVD with ``m = U @ diag(s) @ hermitian(V)``,
pseudo-inverse rank cutoff) that the rest of the package relies on.
"""

from __future__ import annotations

import numpy as np

# Relative rank cutoff for the pseudo-inverse: singular values below
# RANK_RTOL_SCALE * max(rows, cols) * s_max are treated as zero.
RANK_RTOL_SCALE = 1e-12


def as_matrix(m) -> np.ndarray:
    """Validate and return ``m`` as a 2-D complex matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.size == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def hermitian(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Economy singular value decomposition.

    Returns (U, s, V) with ``m = U @ np.diag(s) @ hermitian(V)``, singular
    values sorted descending.  Note V is returned directly, not V^H.
    Non-convergence in the underlying LAPACK driver surfaces as
    ``numpy.linalg.LinAlgError``.
    """
    a = as_matrix(m)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return u, s, vh.conj().T


def rank_cutoff(s: np.ndarray, shape: tuple[int, int]) -> float:
    """Absolute singular-value threshold below which rank is discarded."""
    if s.size == 0:
        return 0.0
    return RANK_RTOL_SCALE * max(shape) * float(s[0])


def pinv(m) -> np.ndarray:
    """Moore-Penrose pseudo-inverse via the economy SVD.

    Singular values below ``1e-12 * max(rows, cols)`` relative to the largest
    are truncated, so exactly singular inputs still yield the minimum-norm
    solution instead of blowing up.
    """
    a = as_matrix(m)
    u, s, v = svd(a)
    cut = rank_cutoff(s, a.shape)
    inv = np.where(s > cut, 1.0 / np.where(s > cut, s, 1.0), 0.0)
    return (v * inv) @ u.conj().T


def matrix_rank(m, s: np.ndarray | None = None) -> int:
    """Numerical rank under the same cutoff rule as :func:`pinv`."""
    a = as_matrix(m)
    if s is None:
        s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > rank_cutoff(s, a.shape)))
