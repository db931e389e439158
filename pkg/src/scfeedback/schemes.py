"""Single-trial pipelines for the compared feedback schemes.

``prop_sca``   superimposed feedback of signs, support and sparsity; SCA-BIHT.
``prop_biht``  superimposed feedback of signs and sparsity; plain BIHT.
``tdm``        signs sent on dedicated slots at full power; plain BIHT with
               the sparsity known at the BS; data sent alone.

A trial draws from four independent streams (channel, measurement matrix,
noise, data) spawned from one ``SeedSequence``. Schemes consume each stream in
the same order, so equal seeds give equal channels and data across schemes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import gen_sparse_channel, gen_uplink_channel, support_vector
from .detection import cancel_interference, mmse_frame_detect, mmse_ulus_detect
from .errors import InvalidParameterError
from .framing import (
    FrameLayout,
    assemble_frame,
    bits_to_signs,
    parse_frame,
    qpsk_demodulate,
    qpsk_modulate,
    signs_to_bits,
)
from .link import LinkConfig, superimpose, transmit, transmit_tdm_symbols
from .onebit import SignMeasurements, compress, gen_measurement_matrix
from .reconstruction import ReconstructionConfig, biht, sca_biht
from .spreading import despread, gen_walsh, spread

__all__ = [
    "SCHEMES",
    "SchemeConfig",
    "TrialOutcome",
    "run_trial",
    "run_trial_prop_biht",
    "run_trial_prop_sca",
    "run_trial_tdm",
]

SCHEMES = ("prop_sca", "prop_biht", "tdm")


@dataclass(frozen=True)
class SchemeConfig:
    """Parameters of one simulated link.

    ``uplink_variance`` is the per-antenna variance of the uplink gains; None
    means ``1 / n``, i.e. unit average array gain, so the SNR is the average
    post-combining SNR of a full-power symbol.
    """

    scheme: str
    n: int = 64
    p: int = 1024
    xi: int = 8
    c: float = 2.0
    rho: float = 0.2
    snr_db: float = 10.0
    itermax: int = 100
    e_k: float = 1.0
    normalize_spread: bool = False
    uplink_variance: float | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidParameterError(f"unknown scheme {self.scheme!r}")
        if self.n < 1 or not 0 <= self.xi <= self.n:
            raise InvalidParameterError(f"need n >= 1 and 0 <= xi <= n, got n={self.n}, xi={self.xi}")
        if not self.c > 0:
            raise InvalidParameterError(f"sampling rate must be positive, got {self.c}")
        if self.m < 1:
            raise InvalidParameterError(f"c={self.c} gives no measurements at n={self.n}")
        if self.p < 1 or self.p & (self.p - 1):
            raise InvalidParameterError(f"p must be a power of two, got {self.p}")
        if self.itermax < 1:
            raise InvalidParameterError("itermax must be >= 1")
        if self.uplink_variance is not None and not self.uplink_variance > 0:
            raise InvalidParameterError("uplink variance must be positive")
        if self.scheme != "tdm":
            if not 0 < self.rho < 1:
                raise InvalidParameterError(f"superimposed schemes need 0 < rho < 1, got {self.rho}")
            if self.layout.l > self.p:
                raise InvalidParameterError(
                    f"frame needs {self.layout.l} codes but only {self.p} exist"
                )
        # the link config validates e_k
        self.link()

    @property
    def m(self) -> int:
        return int(np.floor(self.c * self.n + 0.5))

    @property
    def layout(self) -> FrameLayout:
        return FrameLayout.for_scheme(self.n, self.m, self.scheme == "prop_sca")

    @property
    def bit_overhead(self) -> int:
        """Feedback bits actually sent per channel report."""
        if self.scheme == "tdm":
            return 2 * self.m
        return self.layout.bit_len

    @property
    def extra_bandwidth_ratio(self) -> float:
        return self.m / self.p if self.scheme == "tdm" else 0.0

    @property
    def recon(self) -> ReconstructionConfig:
        return ReconstructionConfig(itermax=self.itermax)

    @property
    def gain_variance(self) -> float:
        return 1.0 / self.n if self.uplink_variance is None else self.uplink_variance

    def link(self, rho: float | None = None) -> LinkConfig:
        return LinkConfig.from_snr(
            self.snr_db, self.rho if rho is None else rho, self.p, self.e_k, self.normalize_spread
        )


@dataclass(frozen=True)
class TrialOutcome:
    bit_errors: int
    bits_total: int
    nmse_value: float
    iterations_used: int
    frame_bit_errors: int = 0
    support_within_feedback: bool | None = None


@dataclass
class _Streams:
    channel: np.random.Generator
    matrix_seed: int
    noise: np.random.Generator
    data: np.random.Generator

    @classmethod
    def from_seed(cls, seed) -> "_Streams":
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        ch, mat, noise, data = ss.spawn(4)
        return cls(
            np.random.default_rng(ch),
            int(mat.generate_state(1, dtype=np.uint64)[0]),
            np.random.default_rng(noise),
            np.random.default_rng(data),
        )


def _nmse(h_true, h_hat) -> float:
    unit = h_true / np.linalg.norm(h_true)
    return float(np.sum(np.abs(unit - h_hat) ** 2))


def _common(cfg: SchemeConfig, streams: _Streams):
    h = gen_sparse_channel(cfg.n, cfg.xi, streams.channel)
    g = gen_uplink_channel(cfg.n, streams.channel, cfg.gain_variance)
    phi = gen_measurement_matrix(cfg.n, cfg.m, streams.matrix_seed)
    data_bits = streams.data.integers(0, 2, size=2 * cfg.p, dtype=np.uint8)
    return h, g, phi, data_bits


def _run_superimposed(cfg: SchemeConfig, seed, with_support: bool) -> TrialOutcome:
    if cfg.xi < 1:
        raise InvalidParameterError("reconstruction needs a channel with xi >= 1")
    streams = _Streams.from_seed(seed)
    h, g, phi, data_bits = _common(cfg, streams)
    layout = cfg.layout
    link = cfg.link()

    # user side
    signs = compress(h, phi)
    z = support_vector(h)
    frame = assemble_frame(signs, z if with_support else None, cfg.xi, layout)
    q = gen_walsh(cfg.p, layout.l)
    s = spread(qpsk_modulate(frame), q, normalize=cfg.normalize_spread)
    d = qpsk_modulate(data_bits)
    y = transmit(superimpose(s, d, link), g, link, streams.noise)

    # base station, single cancellation pass
    x_tilde = despread(y, q, normalize=cfg.normalize_spread)
    x_hat = mmse_frame_detect(x_tilde, g, link)
    frame_hat = qpsk_demodulate(x_hat, layout.bit_len)
    parsed = parse_frame(frame_hat, layout)
    d_est = mmse_ulus_detect(cancel_interference(y, x_hat, q, g, link), g, link)

    xi_hat = min(max(parsed.sparsity, 1), cfg.n)
    if with_support:
        result = sca_biht(parsed.signs, phi, xi_hat, parsed.support, cfg.recon)
        inside = bool(np.all(parsed.support[np.flatnonzero(result.h_hat)] == 1))
    else:
        result = biht(parsed.signs, phi, xi_hat, cfg.recon)
        inside = None
    return TrialOutcome(
        bit_errors=int(np.count_nonzero(d_est.bits != data_bits)),
        bits_total=data_bits.size,
        nmse_value=_nmse(h.coeffs, result.h_hat),
        iterations_used=result.iterations_used,
        frame_bit_errors=int(np.count_nonzero(frame_hat != frame)),
        support_within_feedback=inside,
    )


def run_trial_prop_sca(cfg: SchemeConfig, seed) -> TrialOutcome:
    if cfg.scheme != "prop_sca":
        raise InvalidParameterError(f"config is for {cfg.scheme}, not prop_sca")
    return _run_superimposed(cfg, seed, with_support=True)


def run_trial_prop_biht(cfg: SchemeConfig, seed) -> TrialOutcome:
    if cfg.scheme != "prop_biht":
        raise InvalidParameterError(f"config is for {cfg.scheme}, not prop_biht")
    return _run_superimposed(cfg, seed, with_support=False)


def run_trial_tdm(cfg: SchemeConfig, seed) -> TrialOutcome:
    if cfg.scheme != "tdm":
        raise InvalidParameterError(f"config is for {cfg.scheme}, not tdm")
    if cfg.xi < 1:
        raise InvalidParameterError("reconstruction needs a channel with xi >= 1")
    streams = _Streams.from_seed(seed)
    h, g, phi, data_bits = _common(cfg, streams)
    link = cfg.link(rho=0.0)

    d = qpsk_modulate(data_bits)
    y_data = transmit_tdm_symbols(d, g, link, streams.noise)
    d_est = mmse_ulus_detect(y_data, g, link)

    signs = compress(h, phi)
    sign_bits = np.concatenate([signs_to_bits(signs.y_real), signs_to_bits(signs.y_imag)])
    y_meas = transmit_tdm_symbols(qpsk_modulate(sign_bits), g, link, streams.noise)
    sign_bits_hat = mmse_ulus_detect(y_meas, g, link).bits
    m = cfg.m
    received = SignMeasurements(bits_to_signs(sign_bits_hat[:m]), bits_to_signs(sign_bits_hat[m:]))
    # sparsity is taken as known at the BS in this mode
    result = biht(received, phi, cfg.xi, cfg.recon)
    return TrialOutcome(
        bit_errors=int(np.count_nonzero(d_est.bits != data_bits)),
        bits_total=data_bits.size,
        nmse_value=_nmse(h.coeffs, result.h_hat),
        iterations_used=result.iterations_used,
        frame_bit_errors=int(np.count_nonzero(sign_bits_hat != sign_bits)),
    )


_RUNNERS = {
    "prop_sca": run_trial_prop_sca,
    "prop_biht": run_trial_prop_biht,
    "tdm": run_trial_tdm,
}


def run_trial(cfg: SchemeConfig, seed) -> TrialOutcome:
    return _RUNNERS[cfg.scheme](cfg, seed)
