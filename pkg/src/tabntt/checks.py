"""Invariant suite for a table set, recomputing every expectation from the plan."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tables import TableSet, crt_combine, crt_decompose, fold_mod_p, tabular_mulmod

EXHAUSTIVE_P = 1 << 12
EXHAUSTIVE_LEAF = 1 << 16


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: int
    total: int

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _prime_divisors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out + ([n] if n > 1 else [])


def check_digit_tables(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    t = ts.digits
    P, R = t.P, t.R
    ok = total = 0
    ab = np.multiply.outer(np.arange(R, dtype=object), np.arange(R, dtype=object)) % P
    for l in range(2 * t.d):
        expect = (ab * pow(R, l, P) % P).astype(np.int64)
        ok += int((t.table[l] == expect).sum())
        total += R * R
    zero_ok = int((t.table[:, 0, :] == 0).all())
    return [CheckResult("digit_product_entries", ok, total), CheckResult("digit_product_zero_row", zero_ok, 1)]


def check_mulmod(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    t = ts.digits
    P = t.P
    if full and P <= EXHAUSTIVE_P:
        a, b = np.divmod(np.arange(P * P, dtype=np.int64), P)
    else:
        count = 100_000 if full else 2_000
        a = rng.integers(0, P, count)
        b = rng.integers(0, P, count)
    got = t.mulmod_many(a, b)
    expect = np.array([x * y % P for x, y in zip(a.tolist(), b.tolist())], dtype=np.int64)
    out = [CheckResult("tabular_mulmod", int((got == expect).sum()), a.size)]
    sample = list(zip(a[:64].tolist(), b[:64].tolist()))
    out.append(CheckResult("tabular_mulmod_scalar", sum(tabular_mulmod(x, y, t) == x * y % P for x, y in sample), len(sample)))
    return out


def check_forward(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    lv = ts.leaves
    ok = total = 0
    for k in range(lv.d):
        for j, q in enumerate(lv.leaf_primes):
            expect = np.arange(lv.R, dtype=object) * pow(lv.R, k, q) % q
            ok += int((lv.forward[k, j] == expect.astype(np.int64)).sum())
            total += lv.R
    return [CheckResult("forward_tables", ok, total)]


def check_combine(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    lv = ts.leaves
    qs = lv.leaf_primes
    ok = total = 0
    for j, q in enumerate(qs):
        for res in range(q):
            v = int(lv.combine[lv.combine_offsets[j] + res])
            total += 1
            ok += v < lv.M and all(v % p == (res if i == j else 0) for i, p in enumerate(qs))
    R, P = lv.R, lv.P
    fold_ok = sum(
        int((lv.fold[k] == (np.arange(R, dtype=object) * pow(R, k, P) % P).astype(np.int64)).sum())
        for k in range(lv.fold.shape[0])
    )
    return [CheckResult("combine_tables", ok, total), CheckResult("fold_tables", fold_ok, lv.fold.size)]


def check_crt_roundtrip(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    lv = ts.leaves
    P = lv.P
    c = np.arange(P, dtype=np.int64) if (full and P <= EXHAUSTIVE_P) else rng.integers(0, P, 5_000 if full else 500)
    res = lv.decompose_many(c)
    direct = np.stack([c % q for q in lv.leaf_primes], axis=1)
    back = lv.combine_many(res)
    out = [
        CheckResult("crt_decompose", int((res == direct).all(axis=1).sum()), c.size),
        CheckResult("crt_roundtrip", int((back == c).sum()), c.size),
    ]
    sample = c[:32].tolist()
    scalar_ok = sum(crt_combine(crt_decompose(x, lv), lv) == x and fold_mod_p(x, lv) == x for x in sample)
    out.append(CheckResult("crt_roundtrip_scalar", scalar_ok, len(sample)))
    return out


def channel_transform(tuples: np.ndarray, W: np.ndarray, q: int) -> np.ndarray:
    """Direct per-channel evaluation: out[k] = sum_i t[i] * (W[i][k] mod q) mod q."""
    Wq = [[int(w) % q for w in row] for row in W]
    s = len(Wq)
    out = np.zeros_like(tuples)
    for k in range(s):
        acc = np.zeros(tuples.shape[0], dtype=np.int64)
        for i in range(s):
            acc += tuples[:, i] * Wq[i][k]
        out[:, k] = acc % q
    return out


def check_dft_tables(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    lv = ts.leaves
    out = []
    for s, W in sorted(lv.matrices.items()):
        flat, offs = lv.dft[s]
        ok = total = 0
        for j, q in enumerate(lv.leaf_primes):
            size = q**s
            idx = np.arange(size, dtype=np.int64) if (full and size <= EXHAUSTIVE_LEAF) else rng.integers(0, size, 256)
            tuples = np.stack([(idx // q ** (s - 1 - i)) % q for i in range(s)], axis=1)
            rows = flat[offs[j] + idx[:, None] * s + np.arange(s)]
            ok += int((rows == channel_transform(tuples, W, q)).all(axis=1).sum())
            total += idx.size
        out.append(CheckResult(f"dft_tables[s={s}]", ok, total))
    return out


def check_leaf_transform(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    lv = ts.leaves
    P = lv.P
    out = []
    for s, W in sorted(lv.matrices.items()):
        x = rng.integers(0, P, (200 if full else 20, s))
        expect = np.array(
            [[sum(int(row[j]) * int(W[j, k]) for j in range(s)) % P for k in range(s)] for row in x], dtype=np.int64
        )
        got = lv.lookup_many(x)
        out.append(CheckResult(f"leaf_lookup[s={s}]", int((got == expect).all(axis=1).sum()), x.shape[0]))
    return out


def check_plan(ts: TableSet, full: bool, rng) -> list[CheckResult]:
    p = ts.plan
    n, P, w = p.length_n, p.field_prime_P, p.root_omega
    conditions = [
        (P - 1) % n == 0,
        pow(w, n, P) == 1,
        all(pow(w, n // t, P) != 1 for t in _prime_divisors(n)),
        math.prod(p.leaf_primes) > P * P * max(p.leaf_sizes),
        ts.total_bits() == p.table_bits,
    ]
    return [CheckResult("plan_invariants", sum(conditions), len(conditions))]


SUITE = (
    check_plan,
    check_digit_tables,
    check_mulmod,
    check_forward,
    check_combine,
    check_crt_roundtrip,
    check_dft_tables,
    check_leaf_transform,
)


def run_suite(ts: TableSet, level: str = "quick", seed: int = 0) -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError("level must be quick or full")
    rng = np.random.default_rng(seed)
    results = []
    for check in SUITE:
        results.extend(check(ts, level == "full", rng))
    return results
