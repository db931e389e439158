"""Monte-Carlo sweeps over schemes and link parameters, with CSV output.

Per-trial seeds come from ``numpy.random.SeedSequence`` over
``(master_seed, snr index, rho index, c index, trial index)``. The scheme is
deliberately not part of the key: at a given grid point every scheme sees the
same channels, data and noise streams, so scheme comparisons are paired.
"""
from __future__ import annotations

import csv
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError
from .schemes import SCHEMES, SchemeConfig, TrialOutcome, run_trial

__all__ = [
    "CSV_HEADER",
    "SimRecord",
    "SweepIOError",
    "SweepSpec",
    "ber",
    "nmse",
    "read_csv",
    "run_point",
    "run_sweep",
    "trial_seed",
    "write_csv",
]

log = logging.getLogger(__name__)

CSV_HEADER = (
    "scheme,snr_db,rho,c,n,p,sparsity,trials,seed,ber,nmse,"
    "mean_iterations,bit_overhead,extra_bandwidth_ratio"
)


def ber(true_bits, est_bits) -> float:
    a = np.asarray(true_bits)
    b = np.asarray(est_bits)
    if a.shape != b.shape:
        raise InvalidParameterError(f"bit streams differ in shape: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise InvalidParameterError("empty bit streams")
    return np.count_nonzero(a != b) / a.size


def nmse(h_true, h_hat) -> float:
    """Squared error between the unit-normalised truth and ``h_hat``.

    ``h_hat`` is expected to be unit-norm already (1-bit recovery yields only
    a direction), so the truth is normalised before comparing.
    """
    h_true = np.asarray(h_true)
    h_hat = np.asarray(h_hat)
    if h_true.shape != h_hat.shape:
        raise InvalidParameterError(f"vectors differ in shape: {h_true.shape} vs {h_hat.shape}")
    norm = np.linalg.norm(h_true)
    if norm == 0:
        raise InvalidParameterError("reference channel is all zero")
    return float(np.sum(np.abs(h_true / norm - h_hat) ** 2))


@dataclass(frozen=True)
class SimRecord:
    scheme: str
    snr_db: float
    rho: float
    c: float
    n: int
    p: int
    sparsity: int
    trials: int
    seed: int
    ber: float
    nmse: float
    mean_iterations: float
    bit_overhead: int
    extra_bandwidth_ratio: float


@dataclass(frozen=True)
class SweepSpec:
    schemes: tuple[str, ...] = SCHEMES
    snr_db: tuple[float, ...] = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
    rho: tuple[float, ...] = (0.2,)
    c: tuple[float, ...] = (2.0,)
    trials: int = 2000
    seed: int = 1
    n: int = 64
    p: int = 1024
    sparsity: int = 8
    itermax: int = 100
    normalize_spread: bool = False
    uplink_variance: float | None = None
    out: Path | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParameterError("need at least one trial per point")
        if not self.snr_db or not self.rho or not self.c or not self.schemes:
            raise InvalidParameterError("every grid axis needs at least one value")
        if self.seed < 0:
            raise InvalidParameterError("master seed must be non-negative")
        for s in self.schemes:
            if s not in SCHEMES:
                raise InvalidParameterError(f"unknown scheme {s!r}")

    def points(self):
        """Yield ``(grid key, SchemeConfig)`` in output order.

        TDM has no power split, so it is run once per (snr, c) at the first
        rho index and recorded with rho = 0.
        """
        for scheme in self.schemes:
            rhos = list(enumerate(self.rho))
            if scheme == "tdm":
                rhos = [(0, 0.0)]
            for (i_c, c), (i_r, rho), (i_s, snr) in itertools.product(
                enumerate(self.c), rhos, enumerate(self.snr_db)
            ):
                cfg = SchemeConfig(
                    scheme=scheme, n=self.n, p=self.p, xi=self.sparsity, c=c,
                    rho=rho, snr_db=snr, itermax=self.itermax,
                    normalize_spread=self.normalize_spread,
                    uplink_variance=self.uplink_variance,
                )
                yield (i_s, i_r, i_c), cfg


def trial_seed(master: int, key: tuple[int, ...], trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master), *key, int(trial)])


def _run_chunk(args):
    cfg, master, key, trials = args
    return [run_trial(cfg, trial_seed(master, key, t)) for t in trials]


def _aggregate(cfg: SchemeConfig, outcomes: list[TrialOutcome], master: int) -> SimRecord:
    errors = sum(o.bit_errors for o in outcomes)
    total = sum(o.bits_total for o in outcomes)
    return SimRecord(
        scheme=cfg.scheme,
        snr_db=float(cfg.snr_db),
        rho=float(cfg.rho),
        c=float(cfg.c),
        n=cfg.n,
        p=cfg.p,
        sparsity=cfg.xi,
        trials=len(outcomes),
        seed=int(master),
        ber=errors / total,
        nmse=float(np.mean([o.nmse_value for o in outcomes])),
        mean_iterations=float(np.mean([o.iterations_used for o in outcomes])),
        bit_overhead=cfg.bit_overhead,
        extra_bandwidth_ratio=float(cfg.extra_bandwidth_ratio),
    )


def run_point(cfg: SchemeConfig, trials: int, master: int, key=(0, 0, 0),
              executor: ProcessPoolExecutor | None = None,
              chunk: int = 100) -> list[TrialOutcome]:
    """Run ``trials`` seeded trials of one configuration, in trial order."""
    idx = range(trials)
    if executor is None:
        return _run_chunk((cfg, master, key, idx))
    jobs = [(cfg, master, key, idx[i : i + chunk]) for i in range(0, trials, chunk)]
    # map preserves submission order, so the merge is order-independent
    return [o for part in executor.map(_run_chunk, jobs) for o in part]


class SweepIOError(OSError):
    """Writing the sweep output failed; ``records`` holds what was computed."""

    def __init__(self, msg, records):
        super().__init__(msg)
        self.records = records


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SimRecord]:
    """Run every grid point and return one record per point.

    With ``spec.out`` set, rows are appended as points finish so an
    interrupted sweep leaves its completed points on disk.
    """
    records: list[SimRecord] = []
    executor = ProcessPoolExecutor(workers) if workers > 1 else None
    fh = writer = None
    try:
        if spec.out is not None:
            try:
                fh = open(spec.out, "w", encoding="utf-8", newline="")
                fh.write(CSV_HEADER + "\n")
            except OSError as exc:
                raise SweepIOError(f"cannot write {spec.out}: {exc}", records) from exc
            writer = csv.writer(fh, lineterminator="\n")
        for key, cfg in spec.points():
            outcomes = run_point(cfg, spec.trials, spec.seed, key, executor)
            rec = _aggregate(cfg, outcomes, spec.seed)
            records.append(rec)
            log.info("%s snr=%g rho=%g c=%g: ber=%.4g nmse=%.4g",
                     rec.scheme, rec.snr_db, rec.rho, rec.c, rec.ber, rec.nmse)
            if writer is not None:
                try:
                    writer.writerow(_row(rec))
                    fh.flush()
                except OSError as exc:
                    raise SweepIOError(f"write to {spec.out} failed: {exc}", records) from exc
    finally:
        if fh is not None:
            fh.close()
        if executor is not None:
            executor.shutdown()
    return records


def _fmt(value) -> str:
    if isinstance(value, float):
        # shortest round-trip repr: full double precision
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def _row(rec: SimRecord) -> list[str]:
    return [_fmt(getattr(rec, f.name)) for f in fields(SimRecord)]


def write_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for rec in records:
            writer.writerow(_row(rec))


def read_csv(path) -> list[SimRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if ",".join(header) != CSV_HEADER:
            raise InvalidParameterError(f"unexpected CSV header in {path}")
        types = [f.type for f in fields(SimRecord)]
        out = []
        for row in reader:
            vals = [
                v if t == "str" else int(v) if t == "int" else float(v)
                for v, t in zip(row, types)
            ]
            out.append(SimRecord(*vals))
        return out
