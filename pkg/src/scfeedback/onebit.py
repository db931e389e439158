"""Gaussian measurement matrices and 1-bit compression of complex channels.

Signs live in the symmetric alphabet {-1, +1}; zero maps to -1. The {0, 1}
form only appears at the bit-stream boundary in :mod:`scfeedback.framing`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import SparseChannel
from .errors import InvalidParameterError

__all__ = [
    "MeasurementMatrix",
    "SignMeasurements",
    "compress",
    "gen_measurement_matrix",
    "sign_vec",
]


@dataclass(frozen=True)
class MeasurementMatrix:
    """N x M real Gaussian matrix, reproducible on both link ends from ``seed``."""

    entries: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class SignMeasurements:
    y_real: np.ndarray
    y_imag: np.ndarray

    def __post_init__(self):
        for name in ("y_real", "y_imag"):
            v = np.array(getattr(self, name), dtype=float)
            if v.ndim != 1 or not np.all(np.abs(v) == 1):
                raise InvalidParameterError(f"{name} must be a vector of +/-1")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        if self.y_real.size != self.y_imag.size:
            raise InvalidParameterError("real and imaginary sign vectors differ in length")

    @property
    def m(self) -> int:
        return self.y_real.size

    def stacked(self) -> np.ndarray:
        """2 x M array, real part in row 0."""
        return np.vstack([self.y_real, self.y_imag])


def gen_measurement_matrix(n: int, m: int, seed: int) -> MeasurementMatrix:
    if n < 1 or m < 1:
        raise InvalidParameterError(f"measurement matrix needs n, m >= 1, got {n}x{m}")
    entries = np.random.default_rng(seed).standard_normal((n, m))
    entries.setflags(write=False)
    return MeasurementMatrix(entries, int(seed))


def sign_vec(v) -> np.ndarray:
    """+1 where ``v`` is strictly positive, -1 elsewhere (zero included)."""
    return np.where(np.asarray(v) > 0, 1.0, -1.0)


def compress(h, phi: MeasurementMatrix) -> SignMeasurements:
    coeffs = h.coeffs if isinstance(h, SparseChannel) else np.asarray(h, dtype=complex)
    if coeffs.shape != (phi.n,):
        raise InvalidParameterError(
            f"channel length {coeffs.shape} does not match {phi.n} matrix rows"
        )
    proj = coeffs @ phi.entries
    return SignMeasurements(sign_vec(proj.real), sign_vec(proj.imag))
