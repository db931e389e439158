"""Sparse downlink CSI, Rayleigh uplink gains and complex AWGN.

Every generator takes an explicit ``numpy.random.Generator``; nothing here
touches global random state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "SparseChannel",
    "complex_normal",
    "gen_noise",
    "gen_sparse_channel",
    "gen_uplink_channel",
    "support_vector",
]


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circular complex Gaussian draws with total per-element ``variance``."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True)
class SparseChannel:
    """Downlink channel vector with exactly ``sparsity`` nonzero gains."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim != 1:
            raise InvalidParameterError("channel coefficients must be a vector")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def support(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.coeffs).tolist())

    @property
    def sparsity(self) -> int:
        return int(np.count_nonzero(self.coeffs))


def gen_sparse_channel(n: int, xi: int, rng: np.random.Generator) -> SparseChannel:
    """Place ``xi`` CN(0, 1) gains at uniformly chosen distinct positions."""
    if n < 1 or not 0 <= xi <= n:
        raise InvalidParameterError(f"need n >= 1 and 0 <= xi <= n, got n={n}, xi={xi}")
    coeffs = np.zeros(n, dtype=complex)
    positions = rng.choice(n, size=xi, replace=False)
    values = complex_normal(rng, xi)
    # an exact zero draw would silently shrink the support
    while xi and np.any(values == 0):
        values = complex_normal(rng, xi)
    coeffs[positions] = values
    return SparseChannel(coeffs)


def support_vector(h) -> np.ndarray:
    """0/1 indicator of the nonzero positions of ``h``."""
    coeffs = h.coeffs if isinstance(h, SparseChannel) else np.asarray(h)
    return (coeffs != 0).astype(np.uint8)


def gen_uplink_channel(n: int, rng: np.random.Generator, variance: float = 1.0) -> np.ndarray:
    """i.i.d. CN(0, variance) uplink gains for ``n`` BS antennas.

    The all-zero vector is rejected and redrawn.
    """
    if n < 1:
        raise InvalidParameterError(f"need n >= 1, got {n}")
    if variance <= 0:
        raise InvalidParameterError(f"uplink variance must be positive, got {variance}")
    g = complex_normal(rng, n, variance)
    while not np.any(g):
        g = complex_normal(rng, n, variance)
    return g


def gen_noise(rows: int, cols: int, variance: float, rng: np.random.Generator) -> np.ndarray:
    if variance < 0:
        raise InvalidParameterError(f"noise variance must be >= 0, got {variance}")
    if variance == 0:
        return np.zeros((rows, cols), dtype=complex)
    return complex_normal(rng, (rows, cols), variance)
