"""Walsh spreading codes and (de)spreading of modulated frames."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import hadamard

from .errors import InvalidParameterError

__all__ = ["despread", "gen_walsh", "spread"]


@lru_cache(maxsize=32)
def _walsh(p: int, l: int) -> np.ndarray:
    # float storage keeps the products BLAS-backed; +/-1 entries are exact
    q = hadamard(p, dtype=np.float64)[:, :l].copy()
    q.setflags(write=False)
    return q


def gen_walsh(p: int, l: int) -> np.ndarray:
    """First ``l`` columns of the order-``p`` Sylvester-Hadamard matrix.

    Columns are mutually orthogonal with squared norm ``p``, so
    ``q.T @ q == p * I``. The returned array is read-only and shared.
    """
    if p < 1 or p & (p - 1):
        raise InvalidParameterError(f"code length must be a power of two, got {p}")
    if not 1 <= l <= p:
        raise InvalidParameterError(f"need 1 <= l <= p, got l={l}, p={p}")
    return _walsh(int(p), int(l))


def spread(x, q: np.ndarray, normalize: bool = False) -> np.ndarray:
    """Length-P chip sequence ``x @ q.T``.

    With ``normalize`` the chips are divided by sqrt(L) so that unit-energy
    symbols give unit average chip power.
    """
    x = np.asarray(x)
    if x.ndim != 1 or x.size != q.shape[1]:
        raise InvalidParameterError(f"{x.size} symbols for {q.shape[1]} spreading codes")
    s = x @ q.T
    return s / np.sqrt(q.shape[1]) if normalize else s


def despread(y, q: np.ndarray, normalize: bool = False) -> np.ndarray:
    """Correlate each row of ``y`` with the codes: ``y @ q / P``.

    ``normalize`` undoes the chip scaling applied by :func:`spread`.
    """
    y = np.asarray(y)
    p, l = q.shape
    if y.shape[-1] != p:
        raise InvalidParameterError(f"observation has {y.shape[-1]} chips, codes have {p}")
    out = y @ q / p
    return out * np.sqrt(l) if normalize else out
