"""Feedback frame layout, sparsity field coding and Gray-mapped QPSK.

Wire order of a frame is ``[y_real | y_imag | z | k_bin]`` with +1 sent as
bit 1 and -1 as bit 0. The support segment ``z`` is absent for layouts that
do not feed the support back.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContractViolationError, InvalidParameterError
from .onebit import SignMeasurements

__all__ = [
    "CONSTELLATION",
    "FrameLayout",
    "ParsedFrame",
    "assemble_frame",
    "bits_to_signs",
    "decode_sparsity",
    "encode_sparsity",
    "hard_decide",
    "parse_frame",
    "qpsk_demodulate",
    "qpsk_modulate",
    "signs_to_bits",
    "sparsity_width",
]

_S = 1.0 / np.sqrt(2.0)
# indexed by the two-bit label b0b1
CONSTELLATION = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) * _S


def sparsity_width(n: int) -> int:
    """Bits needed to carry any sparsity in ``[0, n]``."""
    return max(int(n).bit_length(), 1)


@dataclass(frozen=True)
class FrameLayout:
    n: int
    m: int
    b: int
    includes_support: bool

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidParameterError("frame layout needs n, m >= 1")
        if self.b < sparsity_width(self.n):
            raise InvalidParameterError(
                f"sparsity field of {self.b} bits cannot hold values up to {self.n}"
            )

    @classmethod
    def for_scheme(cls, n: int, m: int, includes_support: bool) -> "FrameLayout":
        return cls(n, m, sparsity_width(n), includes_support)

    @property
    def bit_len(self) -> int:
        return 2 * self.m + (self.n if self.includes_support else 0) + self.b

    @property
    def l(self) -> int:  # noqa: E743
        """QPSK symbols per frame, one pad bit for odd lengths."""
        return -(-self.bit_len // 2)

    @property
    def nominal_overhead(self) -> int:
        """Feedback bits excluding the sparsity field."""
        return self.bit_len - self.b


class ParsedFrame(NamedTuple):
    signs: SignMeasurements
    support: np.ndarray | None
    sparsity: int


def signs_to_bits(v) -> np.ndarray:
    return (np.asarray(v) > 0).astype(np.uint8)


def bits_to_signs(bits) -> np.ndarray:
    return np.where(np.asarray(bits) == 1, 1.0, -1.0)


def encode_sparsity(xi: int, b: int) -> np.ndarray:
    """Fixed-width big-endian binary of ``xi``."""
    if b < 1 or not 0 <= xi < 2**b:
        raise InvalidParameterError(f"sparsity {xi} does not fit in {b} bits")
    return np.array([(xi >> (b - 1 - i)) & 1 for i in range(b)], dtype=np.uint8)


def decode_sparsity(bits) -> int:
    value = 0
    for bit in np.asarray(bits, dtype=int):
        value = (value << 1) | int(bit)
    return value


def assemble_frame(
    y: SignMeasurements, z, xi: int, layout: FrameLayout
) -> np.ndarray:
    if y.m != layout.m:
        raise InvalidParameterError(f"{y.m} measurements for a layout expecting {layout.m}")
    parts = [signs_to_bits(y.y_real), signs_to_bits(y.y_imag)]
    if layout.includes_support:
        if z is None:
            raise InvalidParameterError("layout carries the support but none was given")
        z = np.asarray(z, dtype=np.uint8)
        if z.shape != (layout.n,) or np.any(z > 1):
            raise InvalidParameterError(f"support must be a 0/1 vector of length {layout.n}")
        parts.append(z)
    elif z is not None:
        raise InvalidParameterError("layout has no support segment")
    parts.append(encode_sparsity(xi, layout.b))
    return np.concatenate(parts)


def parse_frame(bits, layout: FrameLayout) -> ParsedFrame:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape != (layout.bit_len,):
        raise InvalidParameterError(
            f"frame of {bits.size} bits for a layout of {layout.bit_len}"
        )
    m, n = layout.m, layout.n
    signs = SignMeasurements(bits_to_signs(bits[:m]), bits_to_signs(bits[m : 2 * m]))
    pos = 2 * m
    support = None
    if layout.includes_support:
        support = bits[pos : pos + n].copy()
        pos += n
    return ParsedFrame(signs, support, decode_sparsity(bits[pos:]))


def qpsk_modulate(bits) -> np.ndarray:
    """Gray QPSK with unit symbol energy; odd input gets one trailing 0 bit."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size % 2:
        bits = np.append(bits, np.uint8(0))
    pairs = bits.reshape(-1, 2).astype(int)
    return CONSTELLATION[2 * pairs[:, 0] + pairs[:, 1]]


def hard_decide(symbols) -> np.ndarray:
    """Nearest constellation point; ties go to the lower two-bit label.

    For QPSK the nearest point is decided per axis, and a value exactly on an
    axis resolves to the positive side (label bit 0).
    """
    s = np.asarray(symbols, dtype=complex)
    re = np.where(s.real >= 0, _S, -_S)
    im = np.where(s.imag >= 0, _S, -_S)
    return re + 1j * im


def qpsk_demodulate(symbols, nbits: int | None = None) -> np.ndarray:
    """Inverse Gray map; ``nbits`` drops trailing pad bits."""
    s = np.asarray(symbols, dtype=complex).ravel()
    dist = np.abs(s[:, None] - CONSTELLATION[None, :])
    label = np.argmin(dist, axis=1)
    if s.size and np.max(dist[np.arange(s.size), label]) > 1e-9:
        raise ContractViolationError("symbols must be constellation points; hard-decide first")
    bits = np.empty(2 * s.size, dtype=np.uint8)
    bits[0::2] = label >> 1
    bits[1::2] = label & 1
    if nbits is not None:
        if not 0 <= nbits <= bits.size:
            raise InvalidParameterError(f"cannot take {nbits} bits from {bits.size}")
        bits = bits[:nbits]
    return bits
