"""Operation-count benchmark over a sweep of transform sizes."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass

import numpy as np

from .counts import OpCounts
from .ntt import ntt_forward
from .oracle import dft_at, naive_dft
from .planner import make_plan
from .tables import preprocess

CSV_HEADER = ("n", "mode", "mulmod", "addmod", "table_reads", "compares", "wall_time_ns", "ratio")
FULL_ORACLE_MAX = 1 << 12
SAMPLED_OUTPUTS = 32


class VerificationError(AssertionError):
    pass


@dataclass(frozen=True)
class BenchRecord:
    n: int
    mode: str
    mulmod: int
    addmod: int
    table_reads: int
    compares: int
    wall_time_ns: int
    ratio_ops_per_nlogn: float

    @property
    def total(self) -> int:
        return self.addmod + self.table_reads + self.compares

    def row(self) -> list:
        return [self.n, self.mode, self.mulmod, self.addmod, self.table_reads, self.compares,
                self.wall_time_ns, f"{self.ratio_ops_per_nlogn:.6f}"]


def _check(x, X, plan, rng) -> bool:
    n, w, P = plan.length_n, plan.root_omega, plan.field_prime_P
    if n <= FULL_ORACLE_MAX:
        return bool((np.asarray(naive_dft(x, w, P)) == X).all())
    ks = rng.choice(n, SAMPLED_OUTPUTS, replace=False)
    return dft_at(x, w, P, ks) == [int(X[k]) for k in ks]


def run_bench(sizes, modes=("direct", "lookup"), seed: int = 0, budget_bits=None,
              verify: bool = False) -> list[BenchRecord]:
    """One forward transform of a random vector per (size, mode).

    ``sizes`` are targets; each record carries the realized length.  Raises
    VerificationError when ``verify`` is set and an output disagrees with the
    oracle.
    """
    rng = np.random.default_rng(seed)
    records = []
    for target in sizes:
        plan = make_plan(target, budget_bits, seed)
        ts = preprocess(plan)
        n = plan.length_n
        x = rng.integers(0, plan.field_prime_P, n)
        for mode in modes:
            ntt_forward(x, ts, mode)  # compile kernels, fill twiddle caches
            counters = OpCounts()
            start = time.perf_counter_ns()
            X = ntt_forward(x, ts, mode, counters)
            elapsed = time.perf_counter_ns() - start
            if verify and not _check(x, X, plan, rng):
                raise VerificationError(f"{mode} transform of length {n} disagrees with the oracle")
            records.append(BenchRecord(
                n, mode, counters.mulmod, counters.addmod, counters.table_reads, counters.compares,
                elapsed, counters.total / (n * math.log2(n)),
            ))
    return records


def write_csv(records, out) -> None:
    """Write records to a path or an open text stream."""
    if hasattr(out, "write"):
        _write(records, out)
        return
    with open(out, "w", newline="") as fh:
        _write(records, fh)


def _write(records, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())
