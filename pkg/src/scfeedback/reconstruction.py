"""1-bit compressed-sensing recovery: BIHT and the support-aided SCA-BIHT.

Real and imaginary sign vectors are solved independently (the measurement
matrix is real), then combined and normalised; only the direction of the
channel is recoverable from signs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .onebit import MeasurementMatrix, SignMeasurements, sign_vec

__all__ = [
    "IterationStats",
    "MultiplyCounter",
    "ReconstructionConfig",
    "ReconstructionResult",
    "biht",
    "count_iterations_to_consistency",
    "sca_biht",
    "threshold_best_k",
]


@dataclass(frozen=True)
class ReconstructionConfig:
    itermax: int = 100
    step_size: float = 1.0
    early_stop: bool = False

    def __post_init__(self):
        if self.itermax < 1:
            raise InvalidParameterError(f"itermax must be >= 1, got {self.itermax}")
        if not self.step_size > 0:
            raise InvalidParameterError(f"step size must be positive, got {self.step_size}")


@dataclass(frozen=True)
class ReconstructionResult:
    """Unit-norm estimate plus iteration bookkeeping.

    ``first_consistent`` is the first iteration whose iterate reproduces both
    received sign vectors, or None if that never happened.
    """

    h_hat: np.ndarray
    iterations_used: int
    sign_consistent: bool
    first_consistent: int | None = None


@dataclass
class MultiplyCounter:
    """Tally of scalar multiplies spent in dense matrix products."""

    count: int = 0
    iterations: int = 0

    @property
    def per_iteration(self) -> float:
        return self.count / self.iterations if self.iterations else 0.0


def threshold_best_k(v, k: int) -> np.ndarray:
    """Keep the ``k`` largest-magnitude entries, zero the rest.

    Ties in magnitude favour the lower index.
    """
    v = np.asarray(v)
    if v.ndim != 1:
        raise InvalidParameterError("threshold_best_k expects a vector")
    if not 0 <= k <= v.size:
        raise InvalidParameterError(f"cannot keep {k} of {v.size} entries")
    return _threshold_rows(v[None, :], k)[0]


def _threshold_rows(r: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(r)
    if k == 0:
        return out
    # stable sort on -|r| keeps lower indices first among equal magnitudes
    keep = np.argsort(-np.abs(r), axis=1, kind="stable")[:, :k]
    rows = np.arange(r.shape[0])[:, None]
    out[rows, keep] = r[rows, keep]
    return out


def _solve(y: SignMeasurements, phi: MeasurementMatrix, xi: int, mask,
           cfg: ReconstructionConfig, counter: MultiplyCounter | None) -> ReconstructionResult:
    a = np.asarray(phi.entries, dtype=float)
    n, m = a.shape
    if y.m != m:
        raise InvalidParameterError(f"{y.m} signs for a matrix with {m} columns")
    if not 1 <= xi <= n:
        raise InvalidParameterError(f"sparsity must lie in [1, {n}], got {xi}")
    target = y.stacked()
    r = np.zeros((2, n))
    proj = np.zeros((2, m))
    first = None
    consistent = bool(np.array_equal(sign_vec(proj), target))
    t = 0
    while t < cfg.itermax:
        t += 1
        r = _threshold_rows(r + cfg.step_size * (target - sign_vec(proj)) @ a.T, xi)
        if mask is not None:
            supp = np.any(r != 0, axis=0)
            # an iterate disjoint from the fed-back support is left uncorrected
            if np.any(supp & mask):
                r = r * mask
        proj = r @ a
        if counter is not None:
            counter.count += 4 * n * m
            counter.iterations += 1
        consistent = bool(np.array_equal(sign_vec(proj), target))
        if consistent and first is None:
            first = t
        # a sign-consistent iterate has zero gradient, so it is a fixed point
        # and its support cannot change afterwards
        if consistent and cfg.early_stop:
            break
    combined = r[0] + 1j * r[1]
    norm = np.linalg.norm(combined)
    if norm == 0:
        return ReconstructionResult(np.zeros(n, dtype=complex), t, False, first)
    return ReconstructionResult(combined / norm, t, consistent, first)


def biht(y: SignMeasurements, phi: MeasurementMatrix, xi: int,
         cfg: ReconstructionConfig | None = None,
         counter: MultiplyCounter | None = None) -> ReconstructionResult:
    """Binary iterative hard thresholding on both sign vectors."""
    return _solve(y, phi, xi, None, cfg or ReconstructionConfig(), counter)


def sca_biht(y: SignMeasurements, phi: MeasurementMatrix, xi: int, z,
             cfg: ReconstructionConfig | None = None,
             counter: MultiplyCounter | None = None) -> ReconstructionResult:
    """BIHT whose iterates are masked by a received support indicator ``z``.

    After each gradient step both parts are zeroed outside ``z``, unless the
    joint support of the iterate does not meet ``z`` at all.
    """
    z = np.asarray(z)
    if z.shape != (phi.n,) or not np.all((z == 0) | (z == 1)):
        raise InvalidParameterError(f"support must be a 0/1 vector of length {phi.n}")
    return _solve(y, phi, xi, z.astype(bool), cfg or ReconstructionConfig(), counter)


@dataclass(frozen=True)
class IterationStats:
    per_trial: np.ndarray
    flagged: np.ndarray = field(repr=False)

    @property
    def median(self) -> float:
        return float(np.median(self.per_trial))

    @property
    def mean(self) -> float:
        return float(np.mean(self.per_trial))

    @property
    def n_flagged(self) -> int:
        return int(np.count_nonzero(self.flagged))


def count_iterations_to_consistency(results, itermax: int) -> IterationStats:
    """Iterations each run needed to become sign-consistent.

    Runs that never got there count as ``itermax`` and are flagged.
    """
    firsts = [r.first_consistent for r in results]
    flagged = np.array([f is None for f in firsts], dtype=bool)
    per_trial = np.array([itermax if f is None else f for f in firsts], dtype=int)
    return IterationStats(per_trial, flagged)
