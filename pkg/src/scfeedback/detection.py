"""Base-station processing of a superimposed uplink block.

The chain runs once per block: despread, MMSE-detect the feedback frame,
subtract its re-spread contribution, then MMSE-detect the uplink data.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigurationError, InvalidParameterError
from .framing import hard_decide, qpsk_demodulate
from .link import LinkConfig
from .spreading import spread

__all__ = [
    "UlusEstimate",
    "cancel_interference",
    "frame_soft_estimate",
    "mmse_frame_detect",
    "mmse_ulus_detect",
    "ulus_soft_estimate",
]


@dataclass(frozen=True)
class UlusEstimate:
    symbols: np.ndarray
    bits: np.ndarray


def frame_soft_estimate(x_tilde, g, cfg: LinkConfig) -> np.ndarray:
    """Pre-decision MMSE combine of the despread N x L observation.

    The scalar weight is
    ``P sqrt(rho E) / ((1 + (P - 1) rho) E |g|^2 + noise_var)``
    applied to ``g^H x_tilde``.
    """
    if cfg.rho == 0:
        raise InvalidConfigurationError("no feedback power at rho = 0")
    g = np.asarray(g)
    x_tilde = np.asarray(x_tilde)
    if x_tilde.ndim != 2 or x_tilde.shape[0] != g.size:
        raise InvalidParameterError(f"despread block {x_tilde.shape} does not match {g.size} antennas")
    p, rho, e = cfg.p, cfg.rho, cfg.e_k
    gain = np.vdot(g, g).real
    weight = p * np.sqrt(rho * e) / ((1 + (p - 1) * rho) * e * gain + cfg.noise_var)
    return weight * (g.conj() @ x_tilde)


def mmse_frame_detect(x_tilde, g, cfg: LinkConfig) -> np.ndarray:
    return hard_decide(frame_soft_estimate(x_tilde, g, cfg))


def cancel_interference(y, detected, q: np.ndarray, g, cfg: LinkConfig) -> np.ndarray:
    """Remove the re-spread detected frame from the received block."""
    y = np.asarray(y)
    g = np.asarray(g)
    if y.shape != (g.size, q.shape[0]):
        raise InvalidParameterError(f"block {y.shape} does not match {g.size} x {q.shape[0]}")
    s_hat = spread(detected, q, normalize=cfg.normalize_spread)
    return y - cfg.feedback_amplitude * np.outer(g, s_hat)


def ulus_soft_estimate(d_raw, g, cfg: LinkConfig) -> np.ndarray:
    if cfg.rho == 1:
        raise InvalidConfigurationError("no data power at rho = 1")
    g = np.asarray(g)
    d_raw = np.asarray(d_raw)
    if d_raw.ndim != 2 or d_raw.shape[0] != g.size:
        raise InvalidParameterError(f"block {d_raw.shape} does not match {g.size} antennas")
    amp = cfg.data_amplitude
    weight = amp / (amp**2 * np.vdot(g, g).real + cfg.noise_var)
    return weight * (g.conj() @ d_raw)


def mmse_ulus_detect(d_raw, g, cfg: LinkConfig) -> UlusEstimate:
    """Per-symbol MMSE over the antennas, then hard decision and demapping.

    Residual feedback interference is not modelled in the weight; it is zero
    whenever the frame was detected correctly.
    """
    symbols = hard_decide(ulus_soft_estimate(d_raw, g, cfg))
    return UlusEstimate(symbols, qpsk_demodulate(symbols))
