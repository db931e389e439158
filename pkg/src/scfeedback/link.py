"""Uplink transmission: power-weighted superposition through a SIMO channel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import gen_noise
from .errors import InvalidParameterError

__all__ = ["LinkConfig", "superimpose", "transmit", "transmit_tdm_symbols"]


@dataclass(frozen=True)
class LinkConfig:
    """Power split and noise level of one user's uplink.

    ``rho`` is the share of the total transmit power ``e_k`` spent on the
    feedback signal; ``noise_var`` is the per-element complex noise variance.
    """

    rho: float
    e_k: float = 1.0
    noise_var: float = 0.0
    p: int = 1024
    normalize_spread: bool = False

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise InvalidParameterError(f"rho must lie in [0, 1], got {self.rho}")
        if self.e_k <= 0:
            raise InvalidParameterError(f"transmit power must be positive, got {self.e_k}")
        if self.noise_var < 0:
            raise InvalidParameterError(f"noise variance must be >= 0, got {self.noise_var}")
        if self.p < 1:
            raise InvalidParameterError(f"sequence length must be >= 1, got {self.p}")

    @classmethod
    def from_snr(cls, snr_db: float, rho: float, p: int = 1024, e_k: float = 1.0,
                 normalize_spread: bool = False) -> "LinkConfig":
        return cls(rho, e_k, e_k * 10.0 ** (-snr_db / 10.0), p, normalize_spread)

    @property
    def snr_db(self) -> float:
        if self.noise_var == 0:
            return float("inf")
        return 10.0 * np.log10(self.e_k / self.noise_var)

    @property
    def feedback_amplitude(self) -> float:
        return np.sqrt(self.rho * self.e_k)

    @property
    def data_amplitude(self) -> float:
        return np.sqrt((1.0 - self.rho) * self.e_k)


def superimpose(s, d, cfg: LinkConfig) -> np.ndarray:
    s = np.asarray(s)
    d = np.asarray(d)
    if s.shape != d.shape or s.ndim != 1:
        raise InvalidParameterError(f"feedback {s.shape} and data {d.shape} must be equal-length vectors")
    return cfg.feedback_amplitude * s + cfg.data_amplitude * d


def transmit(x, g, cfg: LinkConfig, rng: np.random.Generator) -> np.ndarray:
    """N x len(x) received block ``g x + noise`` after the matched filter."""
    x = np.asarray(x)
    g = np.asarray(g)
    return np.outer(g, x) + gen_noise(g.size, x.size, cfg.noise_var, rng)


def transmit_tdm_symbols(x, g, cfg: LinkConfig, rng: np.random.Generator) -> np.ndarray:
    """Symbols sent alone on their own time slots, at full power."""
    x = np.asarray(x)
    g = np.asarray(g)
    return np.sqrt(cfg.e_k) * np.outer(g, x) + gen_noise(g.size, x.size, cfg.noise_var, rng)
